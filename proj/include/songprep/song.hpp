#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "songprep/token.hpp"
#include "songprep/vocab.hpp"

namespace songprep {

struct Note {
    int bar = 0;
    int position = 0;  // offset within the bar, on the position grid
    int pitch = 60;
    int duration = 480;  // on the duration grid
    TempoClass tempo = TempoClass::Allegro;

    int onset() const { return bar * kTicksPerBar + position; }
    int end() const { return onset() + duration; }

    auto operator<=>(const Note&) const = default;
};

// A lyric word. `text` is the bare lowercase form used for dictionary and
// vocabulary lookups; `syllables` are the cleaned fragments the word was
// merged from (their concatenation equals text); `punct` holds the word's
// retained punctuation marks.
struct Word {
    std::string text;
    std::vector<std::string> syllables;
    std::string punct;

    bool has_punctuation() const { return !punct.empty(); }

    // Canonical surface form: syllables joined by '+', punctuation appended.
    // Lossless: cleaned fragments contain letters only.
    std::string surface() const;
    static Word from_surface(const std::string& surface);

    bool operator==(const Word&) const = default;
};

struct AlignedSong {
    std::vector<Word> words;
    std::vector<Note> notes;
    std::vector<int> word_of_note;  // per note, non-decreasing, covers all words
    std::vector<int> word_phrase;   // per word
    std::vector<int> note_phrase;   // per note

    bool operator==(const AlignedSong&) const = default;

    int phrase_count() const;

    // Throws InvalidInputError / CapacityError when an invariant fails.
    void validate() const;
};

struct NoteRange {
    int first = 0;
    int count = 0;
};

// Contiguous note block of each word (word_of_note is monotone and total).
std::vector<NoteRange> notes_per_word(const AlignedSong& song);

// All word tokens in order (word i carries word_id i) followed by all note
// tokens in order. Throws on an empty song or cap overflow.
std::vector<Token> encode_song(const AlignedSong& song);

// Inverse of encode_song; throws ParseError (with token index) on layout
// violations.
AlignedSong decode_song(const std::vector<Token>& tokens);

// Stable fingerprints for de-duplication and corpus headers.
std::uint64_t note_sequence_hash(const AlignedSong& song);
std::uint64_t lyric_sequence_hash(const AlignedSong& song);
std::uint64_t corpus_hash(const std::vector<AlignedSong>& songs);

}  // namespace songprep
