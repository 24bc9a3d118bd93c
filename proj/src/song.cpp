#include "songprep/song.hpp"

#include <algorithm>
#include <cctype>

#include "songprep/errors.hpp"
#include "songprep/hash.hpp"

namespace songprep {

std::string Word::surface() const {
    std::string out;
    for (std::size_t i = 0; i < syllables.size(); ++i) {
        if (i) out += '+';
        out += syllables[i];
    }
    if (syllables.empty()) out = text;
    out += punct;
    return out;
}

Word Word::from_surface(const std::string& surface) {
    Word w;
    std::string letters;
    for (char c : surface) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            letters += c;
        } else if (c == '+') {
            w.syllables.push_back(letters);
            letters.clear();
        } else {
            w.punct += c;
        }
    }
    w.syllables.push_back(letters);
    for (const auto& s : w.syllables) w.text += s;
    return w;
}

int AlignedSong::phrase_count() const {
    int max_id = -1;
    for (int p : word_phrase) max_id = std::max(max_id, p);
    for (int p : note_phrase) max_id = std::max(max_id, p);
    return max_id + 1;
}

void AlignedSong::validate() const {
    if (words.empty() || notes.empty()) {
        throw InvalidInputError("song: needs at least one word and one note");
    }
    if (static_cast<int>(words.size()) > kMaxWordId + 1) {
        throw CapacityError("song: word count " + std::to_string(words.size()) + " exceeds " +
                            std::to_string(kMaxWordId + 1));
    }
    if (word_of_note.size() != notes.size() || note_phrase.size() != notes.size() ||
        word_phrase.size() != words.size()) {
        throw InvalidInputError("song: alignment map sizes do not match");
    }
    int prev = 0;
    std::vector<char> seen(words.size(), 0);
    for (std::size_t i = 0; i < word_of_note.size(); ++i) {
        const int w = word_of_note[i];
        if (w < 0 || w >= static_cast<int>(words.size())) {
            throw InvalidInputError("song: note " + std::to_string(i) + " maps to unknown word");
        }
        if (w < prev) {
            throw InvalidInputError("song: word_of_note decreases at note " + std::to_string(i));
        }
        prev = w;
        seen[w] = 1;
    }
    for (std::size_t w = 0; w < seen.size(); ++w) {
        if (!seen[w]) {
            throw InvalidInputError("song: word " + std::to_string(w) + " has no aligned note");
        }
    }
    const int phrases = phrase_count();
    if (phrases > kMaxPhraseId + 1) {
        throw CapacityError("song: phrase count " + std::to_string(phrases) + " exceeds " +
                            std::to_string(kMaxPhraseId + 1));
    }
    std::vector<char> phrase_seen(phrases, 0);
    for (int p : word_phrase) {
        if (p < 0) throw InvalidInputError("song: negative phrase id");
        phrase_seen[p] = 1;
    }
    for (int p : note_phrase) {
        if (p < 0) throw InvalidInputError("song: negative phrase id");
        phrase_seen[p] = 1;
    }
    for (int p = 0; p < phrases; ++p) {
        if (!phrase_seen[p]) {
            throw InvalidInputError("song: phrase ids not contiguous, " + std::to_string(p) +
                                    " missing");
        }
    }
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const Note& n = notes[i];
        if (n.bar < 0 || n.bar > kMaxBar) {
            throw CapacityError("song: note " + std::to_string(i) + " bar out of range");
        }
        if (!is_position_value(n.position) || !is_duration_value(n.duration) || n.pitch < 0 ||
            n.pitch > kMaxPitch) {
            throw InvalidInputError("song: note " + std::to_string(i) + " off the vocabulary grid");
        }
    }
    for (const Word& w : words) {
        if (w.text.empty()) throw InvalidInputError("song: empty word text");
    }
}

std::vector<NoteRange> notes_per_word(const AlignedSong& song) {
    std::vector<NoteRange> ranges(song.words.size());
    for (std::size_t i = 0; i < song.word_of_note.size(); ++i) {
        NoteRange& r = ranges[song.word_of_note[i]];
        if (r.count == 0) r.first = static_cast<int>(i);
        ++r.count;
    }
    return ranges;
}

std::vector<Token> encode_song(const AlignedSong& song) {
    song.validate();
    std::vector<Token> tokens;
    tokens.reserve(song.words.size() + song.notes.size());
    for (std::size_t i = 0; i < song.words.size(); ++i) {
        tokens.push_back(
            Token::make_word(song.words[i].surface(), static_cast<int>(i), song.word_phrase[i]));
    }
    for (std::size_t i = 0; i < song.notes.size(); ++i) {
        const Note& n = song.notes[i];
        tokens.push_back(Token::make_note(n.bar, n.position, n.pitch, n.duration, n.tempo,
                                          song.word_of_note[i], song.note_phrase[i]));
    }
    return tokens;
}

AlignedSong decode_song(const std::vector<Token>& tokens) {
    AlignedSong song;
    bool in_notes = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.is_special()) {
            throw ParseError("special token inside a song sequence", i);
        }
        if (t.is_word()) {
            if (in_notes) throw ParseError("word token after the note block", i);
            if (!t.word_id || *t.word_id != static_cast<int>(song.words.size())) {
                throw ParseError("word token ids must count 0..n-1", i);
            }
            song.words.push_back(Word::from_surface(*t.text));
            song.word_phrase.push_back(*t.phrase_id);
        } else {
            in_notes = true;
            const int w = t.word_id.value_or(-1);
            if (w < 0 || w >= static_cast<int>(song.words.size())) {
                throw ParseError("note token references unknown word id " + std::to_string(w), i);
            }
            song.notes.push_back(Note{*t.bar, *t.position, *t.pitch, *t.duration, *t.tempo});
            song.word_of_note.push_back(w);
            song.note_phrase.push_back(*t.phrase_id);
        }
    }
    try {
        song.validate();
    } catch (const Error& e) {
        throw ParseError(e.what(), tokens.size());
    }
    return song;
}

std::uint64_t note_sequence_hash(const AlignedSong& song) {
    std::string repr;
    for (const Note& n : song.notes) {
        repr += std::to_string(n.bar) + ',' + std::to_string(n.position) + ',' +
                std::to_string(n.pitch) + ',' + std::to_string(n.duration) + ',' +
                tempo_class_name(n.tempo) + ';';
    }
    return fnv1a64(repr);
}

std::uint64_t lyric_sequence_hash(const AlignedSong& song) {
    std::string repr;
    for (const Word& w : song.words) {
        repr += w.surface();
        repr += ';';
    }
    return fnv1a64(repr);
}

std::uint64_t corpus_hash(const std::vector<AlignedSong>& songs) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& song : songs) {
        h = fnv1a64(std::to_string(note_sequence_hash(song)), h);
        h = fnv1a64(std::to_string(lyric_sequence_hash(song)), h);
    }
    return h;
}

}  // namespace songprep
