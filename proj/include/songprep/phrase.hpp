#pragma once

#include <vector>

#include "songprep/song.hpp"

namespace songprep {

struct PhraseOptions {
    int long_note_ticks = 480;   // duration >= this marks a long-note candidate
    int rest_gap_ticks = 240;    // following silence >= this marks a rest candidate
    double punct_ratio = 0.1;    // below this, melody-based recognition is used
};

struct PhraseSegmentation {
    enum class Source { Lyrics, Melody };

    // Index of the last note of each phrase, strictly increasing; the final
    // entry is always the last note of the song.
    std::vector<int> endings;
    Source source = Source::Melody;
};

// Indices of words containing any retained punctuation mark.
std::vector<int> lyrics_based_recognition(const std::vector<Word>& words);

// Long-note and rest-followed candidates, with adjacent pairs resolved
// left to right: a duration difference above 240 ticks drops the later
// candidate, otherwise the earlier one. No two adjacent candidates survive.
std::vector<int> melody_based_recognition(const std::vector<Note>& notes,
                                          const PhraseOptions& options = {});

// Routes on the punctuation-mark ratio: below options.punct_ratio the
// melody-based result is used, otherwise the lyrics-based one (a word's
// ending note is its last aligned note). A final boundary at the last note
// is appended when absent; with no boundaries at all the whole song is one
// phrase.
PhraseSegmentation recognize_phrases(const AlignedSong& song, const PhraseOptions& options = {});

// Copies the song with note/word phrase ids filled in from the
// segmentation. Throws CapacityError past 128 phrases.
AlignedSong assign_phrase_ids(const AlignedSong& song, const PhraseSegmentation& seg);

}  // namespace songprep
