#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "songprep/dictionary.hpp"
#include "songprep/errors.hpp"
#include "songprep/midi.hpp"
#include "songprep/phrase.hpp"
#include "songprep/song.hpp"

namespace songprep {

struct IngestOptions {
    double max_word_repetition = 0.2;  // (words - distinct) / words
    double max_long_short = 0.5;       // share of words with <=2 or >=10 letters
    int short_word_letters = 2;
    int long_word_letters = 10;
    int min_bars = 8;
    int pitch_range_low = 48;   // inclusive
    int pitch_range_high = 72;  // exclusive
    PhraseOptions phrase;
};

// A lyric word with the onset of its first fragment, in the rescaled
// tick base.
struct LyricWord {
    Word word;
    std::int64_t tick = 0;
};

// Melody after cleaning, plus the bars (original indexing) that were removed
// so word onsets can be carried into the shifted timebase.
struct ProcessedMelody {
    std::vector<Note> notes;
    std::vector<int> removed_bars;
    double bpm = 120.0;
};

// Maps a raw tick into the timebase after empty-bar removal. Ticks inside a
// removed bar collapse to the removal point.
std::int64_t remap_tick(std::int64_t tick, const std::vector<int>& removed_bars);

// Lyric phase: clean fragments (letters plus the seven retained punctuation
// marks, lowercased), merge syllable fragments into words, drop words absent
// from the dictionary, then apply the repetition and long/short-word filters.
Rejected<std::vector<LyricWord>> process_lyrics(const RawSong& raw,
                                                const PronouncingDictionary& dict,
                                                const IngestOptions& options = {});

// Melody phase: requires 4/4 and a constant tempo, transposes by whole
// octaves to maximise notes inside [48,72), quantizes onsets and durations
// to the vocabulary grids, keeps the higher pitch of overlapping notes,
// removes empty bars, and enforces the 8..128 bar window.
Rejected<ProcessedMelody> process_melody(const RawSong& raw, const IngestOptions& options = {});

// Combined phase: each word anchors to the note nearest its onset; only the
// first of several words landing on one note is kept; notes between anchors
// belong to the earlier word. Phrase maps come back zeroed.
Rejected<AlignedSong> align_lyrics_melody(const std::vector<LyricWord>& words,
                                          const std::vector<Note>& notes);

// Keeps the first occurrence of each (note-sequence hash, lyric-sequence
// hash) pair, preserving input order.
std::vector<AlignedSong> dedup_corpus(const std::vector<AlignedSong>& songs);

struct PipelineReport {
    int input = 0;
    int retained = 0;
    int parse_failures = 0;
    std::map<std::string, int> rejected;  // reject-code name -> count

    int rejected_total() const;
    void add_rejection(const Rejection& r) { ++rejected[reject_code_name(r.code)]; }
    std::string to_text() const;
};

// Full per-song pipeline: lyrics, melody, alignment, phrase-id assignment.
Rejected<AlignedSong> process_song(const RawSong& raw, const PronouncingDictionary& dict,
                                   const IngestOptions& options = {});

struct IngestResult {
    std::vector<AlignedSong> songs;
    std::vector<std::string> names;  // parallel to songs
    PipelineReport report;
};

// Processes files in sorted-name order (parallel when threads > 1, with a
// deterministic ordered merge), then de-duplicates.
IngestResult ingest_files(const std::vector<std::string>& midi_paths,
                          const PronouncingDictionary& dict, const IngestOptions& options = {},
                          int threads = 1);

}  // namespace songprep
