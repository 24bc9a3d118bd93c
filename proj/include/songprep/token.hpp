#pragma once

#include <optional>
#include <string>
#include <vector>

#include "songprep/vocab.hpp"

namespace songprep {

// One compound token: nine attributes consolidated into a single record.
// Attributes that do not apply to the token's type are unset and serialize
// as "None"; special tokens serialize their own symbol in every column.
struct Token {
    TokenType type = TokenType::Special;
    std::optional<SpecialKind> special;
    std::optional<int> bar;
    std::optional<int> position;
    std::optional<int> pitch;
    std::optional<int> duration;
    std::optional<TempoClass> tempo;
    std::optional<std::string> text;
    std::optional<int> word_id;
    std::optional<int> phrase_id;

    bool operator==(const Token&) const = default;

    static Token make_word(std::string text, int word_id, int phrase_id);
    static Token make_note(int bar, int position, int pitch, int duration, TempoClass tempo,
                           int word_id, int phrase_id);
    static Token make_special(SpecialKind kind);

    bool is_word() const { return type == TokenType::Word; }
    bool is_note() const { return type == TokenType::Note; }
    bool is_special() const { return type == TokenType::Special; }
    bool is_special(SpecialKind k) const { return is_special() && special == k; }

    // Throws InvalidInputError when the attribute pattern does not match the
    // token type (the None-fill rule) or a value is out of vocabulary.
    void validate() const;
};

// Line form, nine space-separated columns in fixed order:
//   type bar position pitch duration tempo text word_id phrase_id
std::string token_to_line(const Token& token);

// Inverse of token_to_line; `record_index` only feeds error messages.
Token token_from_line(const std::string& line, std::size_t record_index = 0);

std::string tokens_to_text(const std::vector<Token>& tokens);

}  // namespace songprep
