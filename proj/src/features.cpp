#include "songprep/features.hpp"

#include "songprep/vocab.hpp"

namespace songprep {

const char* feature_family_name(FeatureFamily family) {
    return family == FeatureFamily::SMR ? "smr" : "srr";
}

std::vector<int> syllable_stress(const std::string& word, const PronouncingDictionary& dict) {
    return dict.stress(word);
}

std::vector<std::uint8_t> melodic_peaks(std::span<const int> pitches) {
    std::vector<std::uint8_t> flags(pitches.size(), 0);
    for (std::size_t i = 1; i + 1 < pitches.size(); ++i) {
        if (pitches[i] > pitches[i - 1] && pitches[i] > pitches[i + 1]) flags[i] = 1;
    }
    return flags;
}

namespace {

bool longer_than_neighbours(std::span<const Note> notes, std::size_t i) {
    if (i > 0 && notes[i].duration <= notes[i - 1].duration) return false;
    if (i + 1 < notes.size() && notes[i].duration <= notes[i + 1].duration) return false;
    return true;
}

}  // namespace

std::vector<std::uint8_t> rhythm_skeleton(std::span<const Note> notes) {
    std::vector<std::uint8_t> flags(notes.size(), 0);
    constexpr int kStrongBeatStep = 960;  // beats 1 and 3 of a 4/4 bar
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const int within = notes[i].position;
        const bool metrical = within % kStrongBeatStep == 0;
        if (metrical) {
            flags[i] = 1;  // rules (a) and (b): (b) is a subset of (a)
            continue;
        }
        const bool on_beat = within % 480 == 0;
        if (on_beat) continue;
        // rule (c): syncopated agogic accent
        const std::int64_t onset = notes[i].onset();
        const std::int64_t next_strong = (onset / kStrongBeatStep + 1) * kStrongBeatStep;
        const bool crosses = onset + notes[i].duration > next_strong;
        if (crosses && longer_than_neighbours(notes, i)) flags[i] = 1;
    }
    return flags;
}

SongFeatures compute_song_features(const AlignedSong& song, const PronouncingDictionary& dict) {
    SongFeatures f;
    f.word_notes = notes_per_word(song);

    f.stress.reserve(song.words.size());
    for (const Word& w : song.words) {
        std::string seg;
        for (int level : syllable_stress(w.text, dict)) seg += static_cast<char>('0' + level);
        f.stress.push_back(std::move(seg));
    }

    std::vector<int> pitches(song.notes.size());
    for (std::size_t i = 0; i < song.notes.size(); ++i) pitches[i] = song.notes[i].pitch;
    const auto peak_flags = melodic_peaks(pitches);
    const auto skeleton_flags = rhythm_skeleton(song.notes);

    f.peaks.resize(song.words.size());
    f.skeleton.resize(song.words.size());
    for (std::size_t w = 0; w < song.words.size(); ++w) {
        const NoteRange& r = f.word_notes[w];
        for (int i = r.first; i < r.first + r.count; ++i) {
            f.peaks[w] += static_cast<char>('0' + peak_flags[i]);
            f.skeleton[w] += static_cast<char>('0' + skeleton_flags[i]);
        }
    }
    return f;
}

}  // namespace songprep
