#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "songprep/dictionary.hpp"
#include "songprep/song.hpp"

namespace songprep {

enum class FeatureFamily { SMR, SRR };

const char* feature_family_name(FeatureFamily family);

// Stress levels of the word's syllables: 0 unstressed, 1 primary,
// 2 secondary. Throws LookupError for out-of-dictionary words (ingestion is
// expected to have filtered those).
std::vector<int> syllable_stress(const std::string& word, const PronouncingDictionary& dict);

// Flag per note: 1 iff the pitch is strictly greater than both neighbours.
// Endpoints are never peaks; equal-pitch plateaus are not peaks.
std::vector<std::uint8_t> melodic_peaks(std::span<const int> pitches);

// Flag per note: 1 iff the note belongs to the rhythm skeleton, the union of
//   (a) metrical accents: onset on beat 1 or 3 (in-bar position 0 or 960);
//   (b) agogic accents on metrical accents: notes from (a) whose duration is
//       strictly greater than both neighbours' (a subset of (a));
//   (c) agogic accents on syncopations: off-beat notes (in-bar position not
//       in {0,480,960,1440}) sounding across the next strong beat, with
//       duration strictly greater than both neighbours'.
// A missing neighbour imposes no duration constraint.
std::vector<std::uint8_t> rhythm_skeleton(std::span<const Note> notes);

// Per-word feature segments used to build joint n-gram patterns. Stress
// segments use digits '0'..'2'; note segments are '0'/'1' flags of the
// word's aligned notes.
struct SongFeatures {
    std::vector<std::string> stress;    // per word
    std::vector<std::string> peaks;     // per word, SMR family
    std::vector<std::string> skeleton;  // per word, SRR family
    std::vector<NoteRange> word_notes;  // note block per word

    const std::vector<std::string>& notes_of(FeatureFamily family) const {
        return family == FeatureFamily::SMR ? peaks : skeleton;
    }
};

SongFeatures compute_song_features(const AlignedSong& song, const PronouncingDictionary& dict);

}  // namespace songprep
