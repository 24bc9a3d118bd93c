#include "songprep/phrase.hpp"

#include <algorithm>
#include <cstdlib>

#include "songprep/errors.hpp"

namespace songprep {

std::vector<int> lyrics_based_recognition(const std::vector<Word>& words) {
    std::vector<int> endings;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (words[i].has_punctuation()) endings.push_back(static_cast<int>(i));
    }
    return endings;
}

std::vector<int> melody_based_recognition(const std::vector<Note>& notes,
                                          const PhraseOptions& options) {
    std::vector<int> cand;
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const bool long_note = notes[i].duration >= options.long_note_ticks;
        const bool rest_follows =
            i + 1 < notes.size() &&
            notes[i + 1].onset() - notes[i].end() >= options.rest_gap_ticks;
        if (long_note || rest_follows) cand.push_back(static_cast<int>(i));
    }
    // Resolve adjacent candidate pairs; re-check around each removal.
    std::size_t i = 1;
    while (i < cand.size()) {
        if (cand[i] == cand[i - 1] + 1) {
            const int d = std::abs(notes[cand[i - 1]].duration - notes[cand[i]].duration);
            cand.erase(cand.begin() + (d > 240 ? i : i - 1));
            if (i > 1) --i;
        } else {
            ++i;
        }
    }
    return cand;
}

PhraseSegmentation recognize_phrases(const AlignedSong& song, const PhraseOptions& options) {
    const auto lyric_endings = lyrics_based_recognition(song.words);
    const double punct_ratio =
        static_cast<double>(lyric_endings.size()) / static_cast<double>(song.words.size());

    PhraseSegmentation seg;
    if (punct_ratio < options.punct_ratio) {
        seg.source = PhraseSegmentation::Source::Melody;
        seg.endings = melody_based_recognition(song.notes, options);
    } else {
        seg.source = PhraseSegmentation::Source::Lyrics;
        // Word note-blocks are disjoint and ordered, so these endings are
        // already strictly increasing.
        const auto ranges = notes_per_word(song);
        for (int w : lyric_endings) {
            seg.endings.push_back(ranges[w].first + ranges[w].count - 1);
        }
    }
    const int last = static_cast<int>(song.notes.size()) - 1;
    if (seg.endings.empty() || seg.endings.back() != last) seg.endings.push_back(last);
    return seg;
}

AlignedSong assign_phrase_ids(const AlignedSong& song, const PhraseSegmentation& seg) {
    if (seg.endings.empty() || seg.endings.back() != static_cast<int>(song.notes.size()) - 1) {
        throw InvalidInputError("segmentation does not cover the song");
    }
    if (static_cast<int>(seg.endings.size()) > kMaxPhraseId + 1) {
        throw CapacityError("phrase count " + std::to_string(seg.endings.size()) + " exceeds " +
                            std::to_string(kMaxPhraseId + 1));
    }
    AlignedSong out = song;
    int phrase = 0;
    for (std::size_t i = 0; i < song.notes.size(); ++i) {
        out.note_phrase[i] = phrase;
        if (phrase < static_cast<int>(seg.endings.size()) &&
            static_cast<int>(i) == seg.endings[phrase]) {
            ++phrase;
        }
    }
    const auto ranges = notes_per_word(out);
    for (std::size_t w = 0; w < out.words.size(); ++w) {
        out.word_phrase[w] = out.note_phrase[ranges[w].first];
    }
    return out;
}

}  // namespace songprep
