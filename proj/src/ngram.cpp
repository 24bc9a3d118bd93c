#include "songprep/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "songprep/errors.hpp"
#include "songprep/hash.hpp"

namespace songprep {

namespace {

std::string join_segments(const std::vector<std::string>& segments, int first, int n) {
    std::string out;
    for (int i = first; i < first + n; ++i) {
        if (i > first) out += '|';
        out += segments[i];
    }
    return out;
}

int segment_count(const std::string& pattern) {
    return static_cast<int>(std::count(pattern.begin(), pattern.end(), '|')) + 1;
}

int note_count_of(const std::string& melodic_pattern) {
    int c = 0;
    for (char ch : melodic_pattern) {
        if (ch != '|') ++c;
    }
    return c;
}

}  // namespace

NGramCounts count_joint_ngrams(const std::vector<SongFeatures>& corpus, FeatureFamily family,
                               int min_n, int max_n) {
    NGramCounts counts;
    counts.family = family;
    counts.min_n = min_n;
    counts.max_n = max_n;
    counts.windows.assign(max_n + 1, 0);

    for (const SongFeatures& song : corpus) {
        const auto& note_segments = song.notes_of(family);
        const int words = static_cast<int>(song.stress.size());
        for (int w = 0; w < words; ++w) {
            ++counts.windows[1];
            ++counts.lyric_unigram[song.stress[w]];
            ++counts.melodic_unigram[note_segments[w]];
        }
        for (int n = min_n; n <= max_n; ++n) {
            for (int w = 0; w + n <= words; ++w) {
                ++counts.windows[n];
                std::string lyric = join_segments(song.stress, w, n);
                std::string melodic = join_segments(note_segments, w, n);
                ++counts.lyric[lyric];
                ++counts.melodic[melodic];
                ++counts.joint[std::move(melodic)][std::move(lyric)];
            }
        }
    }
    return counts;
}

std::vector<JointNGram> enumerate_joint_ngrams(const std::vector<SongFeatures>& corpus,
                                               FeatureFamily family, int min_n, int max_n) {
    const NGramCounts counts = count_joint_ngrams(corpus, family, min_n, max_n);
    std::vector<JointNGram> grams;
    for (const auto& [melodic, lyrics] : counts.joint) {
        for (const auto& [lyric, count] : lyrics) {
            grams.push_back(JointNGram{segment_count(melodic), lyric, melodic, family, count});
        }
    }
    return grams;
}

double t_statistic(std::int64_t count, std::int64_t total,
                   const std::vector<double>& unigram_probs) {
    if (total <= 0) throw InvalidInputError("t_statistic: total must be positive");
    if (count < 1 || count > total) {
        throw InvalidInputError("t_statistic: count must lie in [1, total]");
    }
    double p0 = 1.0;
    for (double p : unigram_probs) {
        if (!(p > 0.0) || p > 1.0) {
            throw InvalidInputError("t_statistic: unigram probabilities must be in (0,1]");
        }
        p0 *= p;
    }
    const double p_hat = static_cast<double>(count) / static_cast<double>(total);
    return (p_hat - p0) / std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(total));
}

RelationshipScore relationship_score(const std::vector<double>& lyric_scores,
                                     const std::vector<double>& probs) {
    if (lyric_scores.empty() || lyric_scores.size() != probs.size()) {
        throw InvalidInputError("relationship_score: lists must be non-empty and equal length");
    }
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0 || p > 1.0) {
            throw InvalidInputError("relationship_score: probability out of [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw InvalidInputError("relationship_score: probabilities sum to " + std::to_string(sum));
    }

    RelationshipScore out;
    const std::size_t m = lyric_scores.size();
    if (m == 1) {
        out.concentration = 1.0;
        out.h_norm = 0.0;
        out.s_lm = lyric_scores[0];
        return out;
    }
    double entropy = 0.0;
    for (double p : probs) {
        if (p > 0.0) entropy -= p * std::log(p);
    }
    out.h_norm = entropy / std::log(static_cast<double>(m));
    out.h_norm = std::min(1.0, std::max(0.0, out.h_norm));
    out.concentration = 1.0 - out.h_norm;
    double mean = 0.0;
    for (double s : lyric_scores) mean += s;
    mean /= static_cast<double>(m);
    out.s_lm = out.concentration * mean;
    return out;
}

const LexiconEntry& FamilyLexicon::at(const std::string& melodic_pattern) const {
    auto it = index_.find(melodic_pattern);
    if (it == index_.end()) throw LookupError("pattern not in lexicon: " + melodic_pattern);
    return entries[it->second];
}

void FamilyLexicon::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) index_[entries[i].melodic_pattern] = i;
}

namespace {

FamilyLexicon build_family(const NGramCounts& counts, FeatureFamily family, double cutoff) {
    FamilyLexicon lex;
    lex.family = family;
    lex.cutoff = cutoff;
    lex.candidate_count = static_cast<std::int64_t>(counts.joint.size());
    for (int n = counts.min_n; n <= counts.max_n; ++n) lex.window_total += counts.windows[n];

    const double unigram_total = static_cast<double>(counts.windows[1]);
    auto melodic_unigram_prob = [&](const std::string& segment) {
        return static_cast<double>(counts.melodic_unigram.at(segment)) / unigram_total;
    };
    auto lyric_unigram_prob = [&](const std::string& segment) {
        return static_cast<double>(counts.lyric_unigram.at(segment)) / unigram_total;
    };
    auto split = [](const std::string& pattern) {
        std::vector<std::string> segments;
        std::string cur;
        for (char c : pattern) {
            if (c == '|') {
                segments.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        segments.push_back(cur);
        return segments;
    };

    for (const auto& [melodic, lyric_map] : counts.joint) {
        const int n = segment_count(melodic);
        const std::int64_t window_total_n = counts.windows[n];
        LexiconEntry entry;
        entry.melodic_pattern = melodic;
        entry.n = n;
        entry.count = counts.melodic.at(melodic);

        std::vector<double> mel_probs;
        for (const auto& seg : split(melodic)) mel_probs.push_back(melodic_unigram_prob(seg));
        entry.s_m = t_statistic(entry.count, window_total_n, mel_probs);

        std::vector<double> lyric_scores;
        std::vector<double> occurrence;
        for (const auto& [lyric, joint_count] : lyric_map) {
            std::vector<double> lyr_probs;
            for (const auto& seg : split(lyric)) lyr_probs.push_back(lyric_unigram_prob(seg));
            lyric_scores.push_back(t_statistic(counts.lyric.at(lyric), window_total_n, lyr_probs));
            occurrence.push_back(static_cast<double>(joint_count) /
                                 static_cast<double>(entry.count));
        }
        const RelationshipScore rel = relationship_score(lyric_scores, occurrence);
        entry.s_lm = rel.s_lm;
        double mean = 0.0;
        for (double s : lyric_scores) mean += s;
        entry.s_l_mean = mean / static_cast<double>(lyric_scores.size());
        entry.s = entry.s_m + entry.s_lm;
        lex.entries.push_back(std::move(entry));
    }

    std::sort(lex.entries.begin(), lex.entries.end(),
              [](const LexiconEntry& a, const LexiconEntry& b) {
                  if (a.s != b.s) return a.s > b.s;
                  if (a.count != b.count) return a.count > b.count;
                  return a.melodic_pattern < b.melodic_pattern;
              });
    const std::size_t keep =
        static_cast<std::size_t>(std::ceil(cutoff * static_cast<double>(lex.entries.size())));
    lex.entries.resize(std::min(lex.entries.size(), keep));
    lex.rebuild_index();
    return lex;
}

}  // namespace

NGramLexicon build_lexicon(const std::vector<SongFeatures>& corpus, double cutoff, int min_n,
                           int max_n) {
    if (!(cutoff > 0.0) || cutoff > 1.0) {
        throw InvalidInputError("build_lexicon: cutoff must be in (0,1]");
    }
    NGramLexicon lexicon;
    std::string fingerprint;
    for (const auto& song : corpus) {
        for (const auto& s : song.stress) fingerprint += s + ",";
        for (const auto& s : song.peaks) fingerprint += s + ",";
        for (const auto& s : song.skeleton) fingerprint += s + ";";
    }
    const std::uint64_t corpus_hash = fnv1a64(fingerprint);

    const NGramCounts smr = count_joint_ngrams(corpus, FeatureFamily::SMR, min_n, max_n);
    const NGramCounts srr = count_joint_ngrams(corpus, FeatureFamily::SRR, min_n, max_n);
    if (smr.joint.empty() && srr.joint.empty()) {
        throw Error("build_lexicon: corpus yields no joint n-gram candidates");
    }
    lexicon.smr = build_family(smr, FeatureFamily::SMR, cutoff);
    lexicon.srr = build_family(srr, FeatureFamily::SRR, cutoff);
    lexicon.smr.corpus_hash = corpus_hash;
    lexicon.srr.corpus_hash = corpus_hash;
    return lexicon;
}

NGramLexicon build_lexicon(const std::vector<AlignedSong>& songs,
                           const PronouncingDictionary& dict, double cutoff, int min_n,
                           int max_n) {
    std::vector<SongFeatures> features;
    features.reserve(songs.size());
    for (const auto& song : songs) features.push_back(compute_song_features(song, dict));
    NGramLexicon lexicon = build_lexicon(features, cutoff, min_n, max_n);
    lexicon.smr.corpus_hash = corpus_hash(songs);
    lexicon.srr.corpus_hash = lexicon.smr.corpus_hash;
    return lexicon;
}

std::vector<MatchSpan> max_match_sample(const SongFeatures& features, const NGramLexicon& lexicon,
                                        double budget, Rng& rng,
                                        std::optional<FeatureFamily> only_family) {
    if (!(budget > 0.0) || budget > 1.0) {
        throw InvalidInputError("max_match_sample: budget must be in (0,1]");
    }
    const int words = static_cast<int>(features.stress.size());
    std::int64_t total_notes = 0;
    for (const auto& r : features.word_notes) total_notes += r.count;

    std::vector<int> unvisited(words);
    for (int i = 0; i < words; ++i) unvisited[i] = i;
    std::vector<char> claimed(words, 0);

    std::vector<MatchSpan> spans;
    std::int64_t covered = 0;

    std::vector<FeatureFamily> families;
    if (only_family) {
        families.push_back(*only_family);
    } else {
        families = {FeatureFamily::SMR, FeatureFamily::SRR};
    }

    while (!unvisited.empty() &&
           static_cast<double>(covered) < budget * static_cast<double>(total_notes)) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(unvisited.size()));
        const int start = unvisited[pick];
        unvisited.erase(unvisited.begin() + pick);
        if (claimed[start]) continue;

        const int max_len = std::min(12, words - start);
        bool accepted = false;
        for (int n = max_len; n >= 2 && !accepted; --n) {
            bool free = true;
            for (int i = start; i < start + n; ++i) {
                if (claimed[i]) {
                    free = false;
                    break;
                }
            }
            if (!free) continue;
            for (FeatureFamily family : families) {
                const auto& segments = features.notes_of(family);
                const std::string pattern = join_segments(segments, start, n);
                if (!lexicon.of(family).contains(pattern)) continue;

                MatchSpan span;
                span.word_start = start;
                span.n_words = n;
                span.note_start = features.word_notes[start].first;
                const NoteRange& last = features.word_notes[start + n - 1];
                span.note_count = last.first + last.count - span.note_start;
                span.family = family;
                spans.push_back(span);
                covered += span.note_count;
                for (int i = start; i < start + n; ++i) claimed[i] = 1;
                accepted = true;
                break;
            }
        }
    }
    std::sort(spans.begin(), spans.end(),
              [](const MatchSpan& a, const MatchSpan& b) { return a.note_start < b.note_start; });
    return spans;
}

std::string lexicon_to_text(const FamilyLexicon& lexicon) {
    std::ostringstream out;
    char buf[512];
    out << "#songprep-lexicon v1\n";
    std::snprintf(buf, sizeof buf, "corpus-hash %016llx\n",
                  static_cast<unsigned long long>(lexicon.corpus_hash));
    out << buf;
    out << "family " << feature_family_name(lexicon.family) << "\n";
    std::snprintf(buf, sizeof buf, "cutoff %.17g\n", lexicon.cutoff);
    out << buf;
    out << "candidates " << lexicon.candidate_count << "\n";
    out << "windows " << lexicon.window_total << "\n";
    out << "entries " << lexicon.entries.size() << "\n";
    for (const auto& e : lexicon.entries) {
        // the pattern goes through the stream: it can outgrow any fixed buffer
        std::snprintf(buf, sizeof buf, " %d %lld %.17g %.17g %.17g %.17g\n", e.n,
                      static_cast<long long>(e.count), e.s_l_mean, e.s_m, e.s_lm, e.s);
        out << e.melodic_pattern << buf;
    }
    return out.str();
}

FamilyLexicon lexicon_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "#songprep-lexicon v1") {
        throw ParseError("bad lexicon header", 0);
    }
    FamilyLexicon lex;
    std::size_t entry_count = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "corpus-hash") {
            std::string hex;
            fields >> hex;
            try {
                lex.corpus_hash = std::stoull(hex, nullptr, 16);
            } catch (const std::exception&) {
                throw ParseError("bad corpus hash '" + hex + "'", line_no);
            }
        } else if (key == "family") {
            std::string name;
            fields >> name;
            if (name == "smr") {
                lex.family = FeatureFamily::SMR;
            } else if (name == "srr") {
                lex.family = FeatureFamily::SRR;
            } else {
                throw ParseError("unknown family '" + name + "'", line_no);
            }
        } else if (key == "cutoff") {
            fields >> lex.cutoff;
        } else if (key == "candidates") {
            fields >> lex.candidate_count;
        } else if (key == "windows") {
            fields >> lex.window_total;
        } else if (key == "entries") {
            fields >> entry_count;
            break;
        } else {
            throw ParseError("unknown lexicon header key '" + key + "'", line_no);
        }
    }
    for (std::size_t i = 0; i < entry_count; ++i) {
        if (!std::getline(in, line)) throw ParseError("lexicon truncated", line_no + i);
        std::istringstream fields(line);
        LexiconEntry e;
        if (!(fields >> e.melodic_pattern >> e.n >> e.count >> e.s_l_mean >> e.s_m >> e.s_lm >>
              e.s)) {
            throw ParseError("bad lexicon entry", line_no + i + 1);
        }
        lex.entries.push_back(std::move(e));
    }
    lex.rebuild_index();
    return lex;
}

void save_lexicon(const FamilyLexicon& lexicon, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write lexicon file '" + path + "'");
    out << lexicon_to_text(lexicon);
}

FamilyLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read lexicon file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return lexicon_from_text(buf.str());
}

}  // namespace songprep
