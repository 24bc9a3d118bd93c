// songprep: corpus toolkit for paired lyric-melody data.
//
// Exit codes: 0 success, 1 usage/config error, 2 unreadable input,
// 3 empty or invalid data, 4 pairing mismatch, 5 missing lexicon,
// 6 internal error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "songprep/corpus_io.hpp"
#include "songprep/dictionary.hpp"
#include "songprep/metrics.hpp"
#include "songprep/ngram.hpp"
#include "songprep/pipeline.hpp"
#include "songprep/pretraining.hpp"

namespace fs = std::filesystem;
using namespace songprep;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitPairing = 4;
constexpr int kExitMissingLexicon = 5;
constexpr int kExitInternal = 6;

struct CliError {
    int code;
    std::string message;
};

std::vector<std::string> list_midi_files(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw CliError{kExitIo, "input directory '" + dir + "' is not readable"};
    }
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == ".mid" || ext == ".midi" || ext == ".kar") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

PronouncingDictionary load_dict(const std::string& path) {
    try {
        return PronouncingDictionary::from_file(path);
    } catch (const Error& e) {
        throw CliError{kExitIo, e.what()};
    }
}

CorpusFile load_corpus(const std::string& path) {
    try {
        return read_corpus(path);
    } catch (const ParseError& e) {
        throw CliError{kExitEmpty, std::string("corpus file is invalid: ") + e.what()};
    } catch (const Error& e) {
        throw CliError{kExitIo, e.what()};
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitIo, "cannot write '" + path + "'"};
    out << text;
}

// Estimated seconds per song from a representative bpm of its tempo class.
double estimate_seconds(const AlignedSong& song) {
    static const double rep_bpm[] = {55, 63, 71, 92, 114, 144, 180};
    if (song.notes.empty()) return 0.0;
    std::int64_t end = 0;
    for (const Note& n : song.notes) end = std::max<std::int64_t>(end, n.end());
    const double bpm = rep_bpm[static_cast<int>(song.notes.front().tempo)];
    return static_cast<double>(end) * 60.0 / (bpm * 480.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"songprep: lyric-melody corpus toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a config file (flags override)");

    std::uint64_t seed = 0;
    int threads = 1;
    app.add_option("--seed", seed, "master random seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for per-song stages")
        ->capture_default_str();

    IngestOptions ingest_opts;
    SamplingOptions sampling_opts;
    double lexicon_cutoff = 0.25;
    int min_n = 2;
    int max_n = 12;
    int max_len = kDefaultMaxSampleLen;

    // ingest
    auto* c_ingest = app.add_subcommand("ingest", "parse MIDI files into an aligned corpus");
    std::string in_dir, dict_path, out_path, report_path;
    c_ingest->add_option("--input", in_dir, "directory of .mid files")->required();
    c_ingest->add_option("--dict", dict_path, "pronouncing dictionary file")->required();
    c_ingest->add_option("--output", out_path, "corpus file to write")->required();
    c_ingest->add_option("--report", report_path, "also write the pipeline report here");
    c_ingest->add_option("--max-word-repetition", ingest_opts.max_word_repetition)
        ->capture_default_str();
    c_ingest->add_option("--max-long-short", ingest_opts.max_long_short)->capture_default_str();
    c_ingest->add_option("--short-word-letters", ingest_opts.short_word_letters)
        ->capture_default_str();
    c_ingest->add_option("--long-word-letters", ingest_opts.long_word_letters)
        ->capture_default_str();
    c_ingest->add_option("--min-bars", ingest_opts.min_bars)->capture_default_str();
    c_ingest->add_option("--long-note-ticks", ingest_opts.phrase.long_note_ticks)
        ->capture_default_str();
    c_ingest->add_option("--rest-gap-ticks", ingest_opts.phrase.rest_gap_ticks)
        ->capture_default_str();
    c_ingest->add_option("--punct-ratio", ingest_opts.phrase.punct_ratio)->capture_default_str();

    // build-lexicon
    auto* c_lexicon = app.add_subcommand("build-lexicon", "score joint n-grams, keep the top 25%");
    std::string corpus_path, out_prefix;
    c_lexicon->add_option("--corpus", corpus_path, "corpus file")->required();
    c_lexicon->add_option("--dict", dict_path, "pronouncing dictionary file")->required();
    c_lexicon->add_option("--out-prefix", out_prefix, "writes <prefix>.smr.lexicon / .srr.lexicon")
        ->required();
    c_lexicon->add_option("--cutoff", lexicon_cutoff)->capture_default_str();
    c_lexicon->add_option("--min-n", min_n)->capture_default_str();
    c_lexicon->add_option("--max-n", max_n)->capture_default_str();

    // phrases
    auto* c_phrases = app.add_subcommand("phrases", "report phrase boundaries per song");
    std::string phrases_out;
    c_phrases->add_option("--corpus", corpus_path, "corpus file")->required();
    c_phrases->add_option("--output", phrases_out, "write the listing here (default stdout)");
    c_phrases->add_option("--long-note-ticks", ingest_opts.phrase.long_note_ticks)
        ->capture_default_str();
    c_phrases->add_option("--rest-gap-ticks", ingest_opts.phrase.rest_gap_ticks)
        ->capture_default_str();
    c_phrases->add_option("--punct-ratio", ingest_opts.phrase.punct_ratio)->capture_default_str();

    // make-batches
    auto* c_batches = app.add_subcommand("make-batches", "emit blank-infilling training samples");
    std::string lexicon_prefix, objective_arg = "all", batch_out;
    c_batches->add_option("--corpus", corpus_path, "corpus file")->required();
    c_batches->add_option("--dict", dict_path, "pronouncing dictionary file")->required();
    c_batches->add_option("--lexicon-prefix", lexicon_prefix,
                          "prefix used by build-lexicon (needed for word objectives)");
    c_batches
        ->add_option("--objective", objective_arg, "word-smr|word-srr|phrase|song|clm|all")
        ->capture_default_str();
    c_batches->add_option("--output", batch_out, "batch file to write")->required();
    c_batches->add_option("--max-len", max_len)->capture_default_str();
    c_batches->add_option("--word-budget", sampling_opts.word_budget)->capture_default_str();
    c_batches->add_option("--phrase-budget", sampling_opts.phrase_budget)->capture_default_str();
    c_batches->add_option("--song-budget", sampling_opts.song_budget)->capture_default_str();
    c_batches->add_option("--mask-prob", sampling_opts.mask_prob)->capture_default_str();
    c_batches->add_option("--replace-prob", sampling_opts.replace_prob)->capture_default_str();
    c_batches->add_option("--long-note-ticks", ingest_opts.phrase.long_note_ticks)
        ->capture_default_str();
    c_batches->add_option("--rest-gap-ticks", ingest_opts.phrase.rest_gap_ticks)
        ->capture_default_str();

    // evaluate
    auto* c_eval = app.add_subcommand("evaluate", "similarity metrics, generated vs reference");
    std::vector<std::string> generated_paths;
    std::string reference_path, eval_out;
    c_eval->add_option("--generated", generated_paths, "one corpus file per run")
        ->required()
        ->expected(-1);
    c_eval->add_option("--reference", reference_path, "reference corpus file")->required();
    c_eval->add_option("--output", eval_out, "write the report here (default stdout)");

    // stats
    auto* c_stats = app.add_subcommand("stats", "corpus statistics");
    c_stats->add_option("--corpus", corpus_path, "corpus file")->required();

    // global flags (--seed, --threads, --config) may follow the subcommand
    for (auto* sub : {c_ingest, c_lexicon, c_phrases, c_batches, c_eval, c_stats}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_ingest) {
            const auto dict = load_dict(dict_path);
            const auto files = list_midi_files(in_dir);
            IngestResult result = ingest_files(files, dict, ingest_opts, threads);
            write_text_file(out_path, corpus_to_text({result.songs, result.names}));
            write_text_file(out_path + ".vocab", vocab_sidecar_text(result.songs));
            const std::string report = result.report.to_text();
            std::cout << report;
            if (!report_path.empty()) write_text_file(report_path, report);
        } else if (*c_lexicon) {
            const auto dict = load_dict(dict_path);
            const CorpusFile corpus = load_corpus(corpus_path);
            if (corpus.songs.empty()) throw CliError{kExitEmpty, "corpus has no songs"};
            NGramLexicon lexicon;
            try {
                lexicon = build_lexicon(corpus.songs, dict, lexicon_cutoff, min_n, max_n);
            } catch (const Error& e) {
                throw CliError{kExitEmpty, e.what()};
            }
            save_lexicon(lexicon.smr, out_prefix + ".smr.lexicon");
            save_lexicon(lexicon.srr, out_prefix + ".srr.lexicon");
            std::cout << "smr candidates " << lexicon.smr.candidate_count << " kept "
                      << lexicon.smr.entries.size() << "\n";
            std::cout << "srr candidates " << lexicon.srr.candidate_count << " kept "
                      << lexicon.srr.entries.size() << "\n";
        } else if (*c_phrases) {
            const CorpusFile corpus = load_corpus(corpus_path);
            std::ostringstream out;
            for (std::size_t i = 0; i < corpus.songs.size(); ++i) {
                const PhraseSegmentation seg =
                    recognize_phrases(corpus.songs[i], ingest_opts.phrase);
                out << "song " << i << " name=" << corpus.names[i] << " source="
                    << (seg.source == PhraseSegmentation::Source::Lyrics ? "lyrics" : "melody")
                    << " endings=";
                for (std::size_t e = 0; e < seg.endings.size(); ++e) {
                    if (e) out << ',';
                    out << seg.endings[e];
                }
                out << "\n";
            }
            if (phrases_out.empty()) {
                std::cout << out.str();
            } else {
                write_text_file(phrases_out, out.str());
            }
        } else if (*c_batches) {
            const auto dict = load_dict(dict_path);
            const CorpusFile corpus = load_corpus(corpus_path);
            if (corpus.songs.empty()) throw CliError{kExitEmpty, "corpus has no songs"};

            std::vector<Objective> objectives;
            if (objective_arg == "all") {
                objectives = {Objective::WordSMR, Objective::WordSRR, Objective::Phrase,
                              Objective::Song};
            } else if (auto obj = objective_from_name(objective_arg)) {
                objectives = {*obj};
            } else {
                throw CliError{kExitUsage, "unknown objective '" + objective_arg + "'"};
            }

            bool needs_lexicon = false;
            for (Objective o : objectives) {
                needs_lexicon |= o == Objective::WordSMR || o == Objective::WordSRR;
            }
            NGramLexicon lexicon;
            if (needs_lexicon) {
                if (lexicon_prefix.empty()) {
                    throw CliError{kExitMissingLexicon,
                                   "--lexicon-prefix is required for word-level objectives"};
                }
                try {
                    lexicon.smr = load_lexicon(lexicon_prefix + ".smr.lexicon");
                    lexicon.srr = load_lexicon(lexicon_prefix + ".srr.lexicon");
                } catch (const Error& e) {
                    throw CliError{kExitMissingLexicon, e.what()};
                }
            }
            std::vector<SongFeatures> features;
            if (needs_lexicon) {
                features.reserve(corpus.songs.size());
                for (const auto& song : corpus.songs) {
                    features.push_back(compute_song_features(song, dict));
                }
            }
            const BatchResult batch =
                make_batches(corpus.songs, features, needs_lexicon ? &lexicon : nullptr,
                             objectives, seed, max_len, sampling_opts, ingest_opts.phrase);
            write_text_file(batch_out, batch_to_text(batch));
            for (const auto& [name, st] : batch.stats) {
                std::printf("%s samples %lld coverage %.4f skipped no-match %lld overflow %lld\n",
                            name.c_str(), static_cast<long long>(st.samples), st.coverage(),
                            static_cast<long long>(st.skipped_no_match),
                            static_cast<long long>(st.skipped_overflow));
            }
        } else if (*c_eval) {
            const CorpusFile reference = load_corpus(reference_path);
            std::vector<MetricReport> runs;
            for (const auto& path : generated_paths) {
                const CorpusFile generated = load_corpus(path);
                try {
                    runs.push_back(evaluate(generated.songs, reference.songs));
                } catch (const InvalidInputError& e) {
                    throw CliError{kExitPairing, e.what()};
                }
            }
            std::ostringstream out;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                out << "run " << i << " (" << generated_paths[i] << ")\n"
                    << runs[i].to_text();
            }
            if (runs.size() > 1) {
                out << "aggregate over " << runs.size() << " runs\n"
                    << aggregate_runs(runs).to_text();
            }
            if (eval_out.empty()) {
                std::cout << out.str();
            } else {
                write_text_file(eval_out, out.str());
            }
        } else if (*c_stats) {
            const CorpusFile corpus = load_corpus(corpus_path);
            if (corpus.songs.empty()) throw CliError{kExitEmpty, "corpus has no songs"};
            double seconds = 0.0, words = 0.0, notes = 0.0, multi = 0.0, word_total = 0.0;
            for (const auto& song : corpus.songs) {
                seconds += estimate_seconds(song);
                words += static_cast<double>(song.words.size());
                notes += static_cast<double>(song.notes.size());
                for (const auto& r : notes_per_word(song)) {
                    word_total += 1.0;
                    if (r.count >= 2) multi += 1.0;
                }
            }
            const double n = static_cast<double>(corpus.songs.size());
            std::printf("songs %zu\n", corpus.songs.size());
            std::printf("total duration (hours, estimated) %.2f\n", seconds / 3600.0);
            std::printf("average duration per song (seconds, estimated) %.2f\n", seconds / n);
            std::printf("average words per song %.2f\n", words / n);
            std::printf("average notes per song %.2f\n", notes / n);
            std::printf("words with multiple notes %.4f\n", multi / word_total);
        }
    } catch (const CliError& e) {
        std::cerr << "songprep: " << e.message << "\n";
        return e.code;
    } catch (const Error& e) {
        std::cerr << "songprep: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "songprep: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
