#include "songprep/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "songprep/errors.hpp"

namespace songprep {

TempoClass tempo_class(double bpm) {
    if (!(bpm > 0.0)) {
        throw InvalidInputError("tempo_class: bpm must be positive, got " + std::to_string(bpm));
    }
    if (bpm < 60.0) return TempoClass::Large;
    if (bpm < 66.0) return TempoClass::Larghetto;
    if (bpm < 76.0) return TempoClass::Adagio;
    if (bpm < 108.0) return TempoClass::Andante;
    if (bpm < 120.0) return TempoClass::Moderato;
    if (bpm < 168.0) return TempoClass::Allegro;
    return TempoClass::Presto;
}

const char* tempo_class_name(TempoClass c) {
    switch (c) {
        case TempoClass::Large: return "Large";
        case TempoClass::Larghetto: return "Larghetto";
        case TempoClass::Adagio: return "Adagio";
        case TempoClass::Andante: return "Andante";
        case TempoClass::Moderato: return "Moderato";
        case TempoClass::Allegro: return "Allegro";
        case TempoClass::Presto: return "Presto";
    }
    return "?";
}

const char* special_kind_symbol(SpecialKind k) {
    switch (k) {
        case SpecialKind::BOS: return "<BOS>";
        case SpecialKind::EOS: return "<EOS>";
        case SpecialKind::MASK: return "<MASK>";
        case SpecialKind::PAD: return "<PAD>";
        case SpecialKind::SEP: return "<SEP>";
    }
    return "?";
}

const char* token_type_name(TokenType t) {
    switch (t) {
        case TokenType::Word: return "word";
        case TokenType::Note: return "note";
        case TokenType::Special: return "special";
    }
    return "?";
}

namespace {

std::vector<int> make_union_grid(int coarse_step, int fine_step, int limit) {
    std::vector<int> grid;
    for (int v = 0; v < limit; v += fine_step) grid.push_back(v);
    for (int v = 0; v < limit; v += coarse_step) grid.push_back(v);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<int> make_duration_grid() {
    std::vector<int> grid;
    for (int v = 30; v <= 1920; v += 30) grid.push_back(v);
    for (int v : {40, 80, 160, 320, 640}) grid.push_back(v);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// Nearest value in a sorted table; on distance ties the smaller value wins,
// which realizes the 30-over-40 grid preference (30k < 40k at equal distance
// from the midpoint).
int nearest_in(const std::vector<int>& table, int ticks) {
    auto it = std::lower_bound(table.begin(), table.end(), ticks);
    if (it == table.end()) return table.back();
    if (it == table.begin()) return table.front();
    const int above = *it;
    const int below = *(it - 1);
    return (above - ticks < ticks - below) ? above : below;
}

}  // namespace

const std::vector<int>& position_values() {
    static const std::vector<int> grid = make_union_grid(40, 30, kTicksPerBar);
    return grid;
}

const std::vector<int>& duration_values() {
    static const std::vector<int> grid = make_duration_grid();
    return grid;
}

bool is_position_value(int ticks) {
    const auto& grid = position_values();
    return std::binary_search(grid.begin(), grid.end(), ticks);
}

bool is_duration_value(int ticks) {
    const auto& grid = duration_values();
    return std::binary_search(grid.begin(), grid.end(), ticks);
}

int quantize_position(int ticks) {
    // Absolute onsets quantize bar-locally so the in-bar offset lands on the
    // position grid; 1920 is a common multiple of both grids.
    const int bar = ticks / kTicksPerBar;
    const int within = ticks % kTicksPerBar;
    int snapped = nearest_in(position_values(), within);
    // A within-bar offset past 1890/1880 may be nearest to the next bar line.
    if (kTicksPerBar - within < within - snapped) {
        return (bar + 1) * kTicksPerBar;
    }
    return bar * kTicksPerBar + snapped;
}

int quantize_duration(int ticks) {
    return nearest_in(duration_values(), ticks);
}

int attribute_vocab_size(Attribute attribute) {
    switch (attribute) {
        case Attribute::Bar: return kMaxBar + 1;
        case Attribute::Position: return static_cast<int>(position_values().size());
        case Attribute::Pitch: return kMaxPitch + 1;
        case Attribute::Duration: return static_cast<int>(duration_values().size());
        case Attribute::Tempo: return 7;
        case Attribute::Text:
            throw InvalidInputError("attribute_vocab_size: text vocabulary is corpus-defined");
        case Attribute::WordId: return kMaxWordId + 1;
        case Attribute::PhraseId: return kMaxPhraseId + 1;
        case Attribute::TokenType: return 2;
    }
    throw InvalidInputError("attribute_vocab_size: unknown attribute");
}

int attribute_vocab_size(std::string_view name) {
    if (name == "bar") return attribute_vocab_size(Attribute::Bar);
    if (name == "position") return attribute_vocab_size(Attribute::Position);
    if (name == "pitch") return attribute_vocab_size(Attribute::Pitch);
    if (name == "duration") return attribute_vocab_size(Attribute::Duration);
    if (name == "tempo") return attribute_vocab_size(Attribute::Tempo);
    if (name == "text") return attribute_vocab_size(Attribute::Text);
    if (name == "word id" || name == "word_id") return attribute_vocab_size(Attribute::WordId);
    if (name == "phrase id" || name == "phrase_id") return attribute_vocab_size(Attribute::PhraseId);
    if (name == "token type" || name == "token_type") return attribute_vocab_size(Attribute::TokenType);
    throw InvalidInputError("attribute_vocab_size: unknown attribute name '" + std::string(name) + "'");
}

}  // namespace songprep
