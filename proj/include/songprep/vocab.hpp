#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace songprep {

// Time base: 480 ticks per quarter note, 1920 per 4/4 bar. The 30-tick grid
// carries binary subdivisions down to 64th notes, the 40-tick grid carries
// triplets.
inline constexpr int kTicksPerQuarter = 480;
inline constexpr int kTicksPerBar = 1920;

inline constexpr int kMaxBar = 127;
inline constexpr int kMaxPitch = 127;
inline constexpr int kMaxWordId = 255;
inline constexpr int kMaxPhraseId = 127;

enum class TempoClass { Large, Larghetto, Adagio, Andante, Moderato, Allegro, Presto };

enum class SpecialKind { BOS, EOS, MASK, PAD, SEP };
inline constexpr int kSpecialKindCount = 5;

enum class TokenType { Word, Note, Special };

enum class Attribute { Bar, Position, Pitch, Duration, Tempo, Text, WordId, PhraseId, TokenType };

// Half-open bpm intervals: Large <60, Larghetto [60,66), Adagio [66,76),
// Andante [76,108), Moderato [108,120), Allegro [120,168), Presto >=168.
TempoClass tempo_class(double bpm);

const char* tempo_class_name(TempoClass c);
const char* special_kind_symbol(SpecialKind k);
const char* token_type_name(TokenType t);

// Onset grid within a bar: multiples of 30 up to 1890 united with multiples
// of 40 up to 1880 (96 values). Sorted ascending.
const std::vector<int>& position_values();

// Duration grid: {30,60,...,1920} united with {40,80,160,320,640} (69
// values). Sorted ascending.
const std::vector<int>& duration_values();

bool is_position_value(int ticks);
bool is_duration_value(int ticks);

// Nearest grid point; ties between the 30- and 40-tick grids break toward
// the 30-tick grid (which wins by appearing first in the sorted table).
int quantize_position(int ticks);
int quantize_duration(int ticks);

// Cardinality of the enumerated vocabulary. The text vocabulary is
// corpus-defined, so Attribute::Text throws InvalidInputError; so does an
// unknown attribute name in the string overload.
int attribute_vocab_size(Attribute attribute);
int attribute_vocab_size(std::string_view attribute_name);

}  // namespace songprep
