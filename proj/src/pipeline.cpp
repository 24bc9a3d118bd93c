#include "songprep/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "songprep/vocab.hpp"

namespace songprep {

namespace {

constexpr std::string_view kPunctuation = "\",:;.?!";

bool is_retained_punct(char c) { return kPunctuation.find(c) != std::string_view::npos; }

bool is_karaoke_meta(const std::string& fragment) {
    for (char c : fragment) {
        if (c == ' ' || c == '\t') continue;
        return c == '@' || c == '%' || c == '#';
    }
    return false;
}

bool starts_new_word(const std::string& fragment) {
    if (fragment.empty()) return true;
    const char c = fragment.front();
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '/' || c == '\\';
}

bool ends_with_hyphen(const std::string& fragment) {
    for (auto it = fragment.rbegin(); it != fragment.rend(); ++it) {
        if (*it == ' ' || *it == '\t') continue;
        return *it == '-';
    }
    return false;
}

struct CleanFragment {
    std::string letters;  // lowercased
    std::string punct;
};

CleanFragment clean_fragment(const std::string& raw) {
    CleanFragment out;
    for (char c : raw) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            out.letters += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (is_retained_punct(c)) {
            out.punct += c;
        }
    }
    return out;
}

}  // namespace

Rejected<std::vector<LyricWord>> process_lyrics(const RawSong& raw,
                                                const PronouncingDictionary& dict,
                                                const IngestOptions& options) {
    const int track = raw.melody_track();
    if (track < 0) {
        return Rejection{RejectCode::NoLyrics, "no track carries both lyrics and notes"};
    }
    const auto& fragments = raw.tracks[track].lyrics;
    if (fragments.empty()) return Rejection{RejectCode::NoLyrics, "no lyric events"};

    // Merge syllable fragments: a fragment continues the open word when the
    // previous one ended with a hyphen or it carries no leading separator.
    std::vector<LyricWord> merged;
    LyricWord open;
    bool word_open = false;
    bool prev_hyphen = false;

    auto close_word = [&]() {
        if (!word_open) return;
        if (!open.word.text.empty()) {
            merged.push_back(open);
        } else if (!open.word.punct.empty() && !merged.empty()) {
            merged.back().word.punct += open.word.punct;
        }
        open = LyricWord{};
        word_open = false;
    };

    for (const RawLyric& fragment : fragments) {
        if (is_karaoke_meta(fragment.text)) continue;
        const bool boundary = !prev_hyphen && starts_new_word(fragment.text);
        if (boundary) close_word();
        const CleanFragment clean = clean_fragment(fragment.text);
        if (!word_open) {
            open.tick = fragment.tick;
            word_open = true;
        }
        if (!clean.letters.empty()) {
            open.word.syllables.push_back(clean.letters);
            open.word.text += clean.letters;
        }
        open.word.punct += clean.punct;
        prev_hyphen = ends_with_hyphen(fragment.text);
    }
    close_word();

    // Dictionary filter.
    std::vector<LyricWord> words;
    for (auto& lw : merged) {
        if (dict.contains(lw.word.text)) words.push_back(std::move(lw));
    }
    if (words.empty()) {
        return Rejection{RejectCode::NoWordsInDictionary, "no word survived the dictionary filter"};
    }

    const double n = static_cast<double>(words.size());
    std::set<std::string> distinct;
    int long_short = 0;
    for (const auto& lw : words) {
        distinct.insert(lw.word.text);
        const int letters = static_cast<int>(lw.word.text.size());
        if (letters <= options.short_word_letters || letters >= options.long_word_letters) {
            ++long_short;
        }
    }
    const double repetition = (n - static_cast<double>(distinct.size())) / n;
    if (repetition > options.max_word_repetition) {
        std::ostringstream why;
        why << "word repetition ratio " << repetition << " > " << options.max_word_repetition;
        return Rejection{RejectCode::WordRepetition, why.str()};
    }
    const double long_short_ratio = static_cast<double>(long_short) / n;
    if (long_short_ratio > options.max_long_short) {
        std::ostringstream why;
        why << "long/short word ratio " << long_short_ratio << " > " << options.max_long_short;
        return Rejection{RejectCode::LongShortWords, why.str()};
    }
    return words;
}

namespace {

struct WorkNote {
    std::int64_t onset;
    int pitch;
    int duration;
};

std::int64_t quantize_onset(std::int64_t onset) {
    const std::int64_t bar = onset / kTicksPerBar;
    const int within = static_cast<int>(onset % kTicksPerBar);
    const std::int64_t snapped = quantize_position(within);
    return bar * kTicksPerBar + snapped;
}

// Whole-octave shift maximising in-range notes; scanned 0,+1,-1,+2,... so a
// tie favours the smaller |shift| and then the upward one. Shifts pushing
// any pitch out of [0,127] are not considered.
int best_octave_shift(const std::vector<WorkNote>& notes, int low, int high) {
    int best_shift = 0;
    int best_count = -1;
    for (int magnitude = 0; magnitude <= 10; ++magnitude) {
        for (int sign : {+1, -1}) {
            if (magnitude == 0 && sign < 0) continue;
            const int shift = sign * magnitude * 12;
            int count = 0;
            bool feasible = true;
            for (const auto& n : notes) {
                const int p = n.pitch + shift;
                if (p < 0 || p > kMaxPitch) {
                    feasible = false;
                    break;
                }
                if (p >= low && p < high) ++count;
            }
            if (feasible && count > best_count) {
                best_count = count;
                best_shift = shift;
            }
        }
    }
    return best_shift;
}

// Overlapping notes keep the higher pitch; chords (equal onsets) collapse
// to their top note.
void monophonize(std::vector<WorkNote>& notes) {
    // total order, so equal (onset, pitch) notes resolve identically on any
    // standard library
    std::sort(notes.begin(), notes.end(), [](const WorkNote& a, const WorkNote& b) {
        if (a.onset != b.onset) return a.onset < b.onset;
        if (a.pitch != b.pitch) return a.pitch > b.pitch;
        return a.duration > b.duration;
    });
    std::vector<WorkNote> kept;
    for (const auto& n : notes) {
        bool drop = false;
        while (!kept.empty() && n.onset < kept.back().onset + kept.back().duration) {
            if (n.pitch > kept.back().pitch) {
                kept.pop_back();
            } else {
                drop = true;
                break;
            }
        }
        if (!drop) kept.push_back(n);
    }
    notes = std::move(kept);
}

}  // namespace

std::int64_t remap_tick(std::int64_t tick, const std::vector<int>& removed_bars) {
    const std::int64_t bar = tick / kTicksPerBar;
    const std::int64_t within = tick % kTicksPerBar;
    std::int64_t removed_before = 0;
    bool in_removed = false;
    for (int rb : removed_bars) {
        if (rb < bar) ++removed_before;
        if (rb == bar) in_removed = true;
    }
    if (in_removed) return (bar - removed_before) * kTicksPerBar;
    return (bar - removed_before) * kTicksPerBar + within;
}

Rejected<ProcessedMelody> process_melody(const RawSong& raw, const IngestOptions& options) {
    for (const auto& ts : raw.time_signatures) {
        if (ts.numerator != 4 || ts.denominator != 4) {
            return Rejection{RejectCode::NotFourFour,
                             std::to_string(ts.numerator) + "/" + std::to_string(ts.denominator)};
        }
    }
    std::set<std::uint32_t> tempo_values;
    for (const auto& t : raw.tempos) tempo_values.insert(t.usec_per_quarter);
    if (tempo_values.size() > 1) {
        return Rejection{RejectCode::TempoChange,
                         std::to_string(tempo_values.size()) + " distinct tempi"};
    }
    const double bpm = raw.tempos.empty() ? 120.0 : raw.tempos.front().bpm;

    const int track = raw.melody_track();
    if (track < 0 || raw.tracks[track].notes.empty()) {
        return Rejection{RejectCode::NoNotes, "no lyric-bearing track with notes"};
    }

    std::vector<WorkNote> notes;
    notes.reserve(raw.tracks[track].notes.size());
    for (const RawNote& n : raw.tracks[track].notes) {
        WorkNote w;
        w.onset = quantize_onset(n.onset);
        // anything past a bar snaps to the 1920 cap anyway
        w.duration = quantize_duration(
            static_cast<int>(std::min<std::int64_t>(n.duration, 2 * kTicksPerBar)));
        w.pitch = n.pitch;
        notes.push_back(w);
    }

    monophonize(notes);

    // Empty-bar removal; removal can surface overlaps (a note sounding across
    // a removed bar meets the notes shifted into it), so monophonize again
    // and iterate until stable. removed_bars tracks original indices.
    std::vector<int> removed_bars;
    for (;;) {
        if (notes.empty()) return Rejection{RejectCode::NoNotes, "no notes after cleaning"};
        std::set<std::int64_t> occupied;
        std::int64_t max_bar = 0;
        for (const auto& n : notes) {
            occupied.insert(n.onset / kTicksPerBar);
            max_bar = std::max(max_bar, n.onset / kTicksPerBar);
        }
        std::vector<std::int64_t> empty_now;
        for (std::int64_t b = 0; b <= max_bar; ++b) {
            if (!occupied.count(b)) empty_now.push_back(b);
        }
        if (empty_now.empty()) break;

        // Translate current bar indices back to original ones: the b-th
        // surviving original bar corresponds to current bar b.
        std::set<int> removed_set(removed_bars.begin(), removed_bars.end());
        std::vector<int> survivors;
        for (int ob = 0; static_cast<int>(survivors.size()) <= max_bar + 1; ++ob) {
            if (!removed_set.count(ob)) survivors.push_back(ob);
        }
        for (std::int64_t b : empty_now) removed_bars.push_back(survivors[b]);
        std::sort(removed_bars.begin(), removed_bars.end());

        for (auto& n : notes) {
            const std::int64_t bar = n.onset / kTicksPerBar;
            const auto shift_bars =
                std::lower_bound(empty_now.begin(), empty_now.end(), bar) - empty_now.begin();
            n.onset -= shift_bars * kTicksPerBar;
        }
        monophonize(notes);
    }

    const std::int64_t bar_count = notes.back().onset / kTicksPerBar + 1;
    if (bar_count < options.min_bars) {
        return Rejection{RejectCode::TooFewBars,
                         std::to_string(bar_count) + " bars < " + std::to_string(options.min_bars)};
    }
    if (bar_count > kMaxBar + 1) {
        return Rejection{RejectCode::TooManyBars, std::to_string(bar_count) + " bars > 128"};
    }

    // Transpose last, over the notes that actually survive: the in-range
    // count is then maximal for the output melody and reprocessing it picks
    // shift 0. Monophony decisions are shift-invariant, so the note set is
    // the same either way.
    const int shift = best_octave_shift(notes, options.pitch_range_low, options.pitch_range_high);
    for (auto& n : notes) n.pitch += shift;

    ProcessedMelody out;
    out.removed_bars = std::move(removed_bars);
    out.bpm = bpm;
    const TempoClass tc = tempo_class(bpm);
    out.notes.reserve(notes.size());
    for (const auto& n : notes) {
        out.notes.push_back(Note{static_cast<int>(n.onset / kTicksPerBar),
                                 static_cast<int>(n.onset % kTicksPerBar), n.pitch, n.duration,
                                 tc});
    }
    return out;
}

Rejected<AlignedSong> align_lyrics_melody(const std::vector<LyricWord>& words,
                                          const std::vector<Note>& notes) {
    if (words.empty() || notes.empty()) {
        throw InvalidInputError("alignment needs non-empty words and notes");
    }
    std::vector<std::int64_t> onsets(notes.size());
    for (std::size_t i = 0; i < notes.size(); ++i) onsets[i] = notes[i].onset();

    auto nearest_note = [&](std::int64_t tick) {
        auto it = std::lower_bound(onsets.begin(), onsets.end(), tick);
        if (it == onsets.end()) return static_cast<int>(onsets.size()) - 1;
        if (it == onsets.begin()) return 0;
        const auto above = it - onsets.begin();
        const auto below = above - 1;
        // ties resolve to the earlier note
        return (onsets[above] - tick < tick - onsets[below]) ? static_cast<int>(above)
                                                             : static_cast<int>(below);
    };

    // Anchor each word; of several words on one note only the first is kept.
    std::vector<Word> kept;
    std::vector<int> anchors;
    for (const auto& lw : words) {
        const int note = nearest_note(lw.tick);
        if (!anchors.empty() && note <= anchors.back()) continue;
        anchors.push_back(note);
        kept.push_back(lw.word);
    }
    if (kept.size() == 1 && words.size() >= 2) {
        return Rejection{RejectCode::DegenerateAlignment, "all words collapse onto one note"};
    }
    if (static_cast<int>(kept.size()) > kMaxWordId + 1) {
        return Rejection{RejectCode::TooManyWords,
                         std::to_string(kept.size()) + " words > " + std::to_string(kMaxWordId + 1)};
    }

    AlignedSong song;
    song.words = std::move(kept);
    song.notes = notes;
    song.word_of_note.resize(notes.size());
    int w = 0;
    for (std::size_t i = 0; i < notes.size(); ++i) {
        while (w + 1 < static_cast<int>(anchors.size()) &&
               static_cast<int>(i) >= anchors[w + 1]) {
            ++w;
        }
        song.word_of_note[i] = w;
    }
    song.word_phrase.assign(song.words.size(), 0);
    song.note_phrase.assign(song.notes.size(), 0);
    return song;
}

std::vector<AlignedSong> dedup_corpus(const std::vector<AlignedSong>& songs) {
    std::vector<AlignedSong> unique_songs;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& song : songs) {
        const auto key = std::make_pair(note_sequence_hash(song), lyric_sequence_hash(song));
        if (seen.insert(key).second) unique_songs.push_back(song);
    }
    return unique_songs;
}

int PipelineReport::rejected_total() const {
    int total = 0;
    for (const auto& [name, count] : rejected) total += count;
    return total;
}

std::string PipelineReport::to_text() const {
    std::ostringstream out;
    out << "input " << input << "\n";
    out << "retained " << retained << "\n";
    out << "parse-failures " << parse_failures << "\n";
    for (const auto& [name, count] : rejected) {
        out << "rejected." << name << " " << count << "\n";
    }
    return out.str();
}

Rejected<AlignedSong> process_song(const RawSong& raw, const PronouncingDictionary& dict,
                                   const IngestOptions& options) {
    auto lyrics = process_lyrics(raw, dict, options);
    if (!lyrics) return lyrics.rejection();
    auto melody = process_melody(raw, options);
    if (!melody) return melody.rejection();

    std::vector<LyricWord> words = std::move(lyrics).value();
    for (auto& lw : words) lw.tick = remap_tick(lw.tick, melody.value().removed_bars);

    auto aligned = align_lyrics_melody(words, melody.value().notes);
    if (!aligned) return aligned.rejection();

    AlignedSong song = std::move(aligned).value();
    const PhraseSegmentation seg = recognize_phrases(song, options.phrase);
    if (static_cast<int>(seg.endings.size()) > kMaxPhraseId + 1) {
        return Rejection{RejectCode::TooManyPhrases,
                         std::to_string(seg.endings.size()) + " phrases > 128"};
    }
    return assign_phrase_ids(song, seg);
}

IngestResult ingest_files(const std::vector<std::string>& midi_paths,
                          const PronouncingDictionary& dict, const IngestOptions& options,
                          int threads) {
    std::vector<std::string> paths = midi_paths;
    std::sort(paths.begin(), paths.end());

    struct Slot {
        bool ok = false;
        bool parse_failed = false;
        AlignedSong song;
        Rejection rejection{RejectCode::NoLyrics, ""};
    };
    std::vector<Slot> slots(paths.size());

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Slot& slot = slots[i];
            try {
                const RawSong raw = parse_midi_file(paths[i]);
                auto processed = process_song(raw, dict, options);
                if (processed) {
                    slot.ok = true;
                    slot.song = std::move(processed).value();
                } else {
                    slot.rejection = processed.rejection();
                }
            } catch (const Error&) {
                slot.parse_failed = true;
            }
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1 || paths.size() < 2) {
        work(0, paths.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (paths.size() + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(paths.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    IngestResult result;
    result.report.input = static_cast<int>(paths.size());
    std::vector<AlignedSong> songs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (slots[i].ok) {
            songs.push_back(std::move(slots[i].song));
            names.push_back(std::filesystem::path(paths[i]).filename().string());
        } else if (slots[i].parse_failed) {
            ++result.report.parse_failures;
        } else {
            result.report.add_rejection(slots[i].rejection);
        }
    }

    // De-duplicate, preserving first occurrences.
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (std::size_t i = 0; i < songs.size(); ++i) {
        const auto key = std::make_pair(note_sequence_hash(songs[i]), lyric_sequence_hash(songs[i]));
        if (seen.insert(key).second) {
            result.songs.push_back(std::move(songs[i]));
            result.names.push_back(std::move(names[i]));
        } else {
            ++result.report.rejected["duplicate"];
        }
    }
    result.report.retained = static_cast<int>(result.songs.size());
    return result;
}

}  // namespace songprep
