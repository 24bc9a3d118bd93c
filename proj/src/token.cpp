#include "songprep/token.hpp"

#include <array>
#include <sstream>

#include "songprep/errors.hpp"

namespace songprep {

Token Token::make_word(std::string text, int word_id, int phrase_id) {
    Token t;
    t.type = TokenType::Word;
    t.text = std::move(text);
    t.word_id = word_id;
    t.phrase_id = phrase_id;
    return t;
}

Token Token::make_note(int bar, int position, int pitch, int duration, TempoClass tempo,
                       int word_id, int phrase_id) {
    Token t;
    t.type = TokenType::Note;
    t.bar = bar;
    t.position = position;
    t.pitch = pitch;
    t.duration = duration;
    t.tempo = tempo;
    t.word_id = word_id;
    t.phrase_id = phrase_id;
    return t;
}

Token Token::make_special(SpecialKind kind) {
    Token t;
    t.type = TokenType::Special;
    t.special = kind;
    return t;
}

namespace {

void check(bool cond, const char* what) {
    if (!cond) throw InvalidInputError(std::string("token: ") + what);
}

}  // namespace

void Token::validate() const {
    switch (type) {
        case TokenType::Word:
            check(!special, "word token carries a special kind");
            check(!bar && !position && !pitch && !duration && !tempo,
                  "word token must have None musical attributes");
            check(text.has_value() && !text->empty(), "word token requires text");
            check(word_id && *word_id >= 0 && *word_id <= kMaxWordId, "word id out of range");
            check(phrase_id && *phrase_id >= 0 && *phrase_id <= kMaxPhraseId,
                  "phrase id out of range");
            break;
        case TokenType::Note:
            check(!special, "note token carries a special kind");
            check(!text, "note token must have None text");
            check(bar && *bar >= 0 && *bar <= kMaxBar, "bar out of range");
            check(position && is_position_value(*position), "position off the grid");
            check(pitch && *pitch >= 0 && *pitch <= kMaxPitch, "pitch out of range");
            check(duration && is_duration_value(*duration), "duration off the grid");
            check(tempo.has_value(), "note token requires a tempo class");
            check(word_id && *word_id >= 0 && *word_id <= kMaxWordId, "word id out of range");
            check(phrase_id && *phrase_id >= 0 && *phrase_id <= kMaxPhraseId,
                  "phrase id out of range");
            break;
        case TokenType::Special:
            check(special.has_value(), "special token requires a kind");
            check(!bar && !position && !pitch && !duration && !tempo && !text && !word_id &&
                      !phrase_id,
                  "special token attributes all carry the symbol itself");
            break;
    }
}

namespace {

std::string opt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("None");
}

TempoClass tempo_from_name(const std::string& s, std::size_t index) {
    for (TempoClass c : {TempoClass::Large, TempoClass::Larghetto, TempoClass::Adagio,
                         TempoClass::Andante, TempoClass::Moderato, TempoClass::Allegro,
                         TempoClass::Presto}) {
        if (s == tempo_class_name(c)) return c;
    }
    throw ParseError("unknown tempo class '" + s + "'", index);
}

SpecialKind special_from_symbol(const std::string& s, std::size_t index) {
    for (SpecialKind k : {SpecialKind::BOS, SpecialKind::EOS, SpecialKind::MASK, SpecialKind::PAD,
                          SpecialKind::SEP}) {
        if (s == special_kind_symbol(k)) return k;
    }
    throw ParseError("unknown special symbol '" + s + "'", index);
}

int parse_int(const std::string& s, std::size_t index) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected integer, got '" + s + "'", index);
    }
}

}  // namespace

std::string token_to_line(const Token& token) {
    if (token.is_special()) {
        const std::string sym = special_kind_symbol(*token.special);
        std::string line = sym;
        for (int i = 0; i < 8; ++i) line += " " + sym;
        return line;
    }
    std::ostringstream out;
    out << (token.is_word() ? "word" : "note");
    out << ' ' << opt_int(token.bar);
    out << ' ' << opt_int(token.position);
    out << ' ' << opt_int(token.pitch);
    out << ' ' << opt_int(token.duration);
    out << ' ' << (token.tempo ? tempo_class_name(*token.tempo) : "None");
    out << ' ' << (token.text ? *token.text : "None");
    out << ' ' << opt_int(token.word_id);
    out << ' ' << opt_int(token.phrase_id);
    return out.str();
}

Token token_from_line(const std::string& line, std::size_t record_index) {
    std::istringstream in(line);
    std::array<std::string, 9> col;
    for (auto& c : col) {
        if (!(in >> c)) throw ParseError("token record needs nine columns", record_index);
    }
    std::string extra;
    if (in >> extra) throw ParseError("token record has trailing columns", record_index);

    Token t;
    if (!col[0].empty() && col[0][0] == '<') {
        t = Token::make_special(special_from_symbol(col[0], record_index));
        for (const auto& c : col) {
            if (c != col[0]) {
                throw ParseError("special token columns must all repeat the symbol", record_index);
            }
        }
        return t;
    }
    if (col[0] == "word") {
        t.type = TokenType::Word;
    } else if (col[0] == "note") {
        t.type = TokenType::Note;
    } else {
        throw ParseError("unknown token type '" + col[0] + "'", record_index);
    }
    auto opt = [&](const std::string& s) -> std::optional<int> {
        if (s == "None") return std::nullopt;
        return parse_int(s, record_index);
    };
    t.bar = opt(col[1]);
    t.position = opt(col[2]);
    t.pitch = opt(col[3]);
    t.duration = opt(col[4]);
    if (col[5] != "None") t.tempo = tempo_from_name(col[5], record_index);
    if (col[6] != "None") t.text = col[6];
    t.word_id = opt(col[7]);
    t.phrase_id = opt(col[8]);
    try {
        t.validate();
    } catch (const Error& e) {
        throw ParseError(e.what(), record_index);
    }
    return t;
}

std::string tokens_to_text(const std::vector<Token>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        out += token_to_line(t);
        out += '\n';
    }
    return out;
}

}  // namespace songprep
