#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace songprep {

// Contract violations and malformed input surface as exceptions; data-quality
// filtering (expected, counted outcomes) uses Rejection values instead.

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInputError : Error {
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

struct CapacityError : Error {
    explicit CapacityError(const std::string& what) : Error(what) {}
};

struct LookupError : Error {
    explicit LookupError(const std::string& what) : Error(what) {}
};

struct MaskError : Error {
    explicit MaskError(const std::string& what) : Error(what) {}
};

// Parse failures carry the byte offset (binary input) or record index (text).
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
};

enum class RejectCode {
    NoLyrics,
    NoWordsInDictionary,
    WordRepetition,
    LongShortWords,
    NotFourFour,
    TempoChange,
    NoNotes,
    TooFewBars,
    TooManyBars,
    DegenerateAlignment,
    TooManyWords,
    TooManyPhrases,
    SampleOverflow,
    EmptyObjective,
};

const char* reject_code_name(RejectCode code);

struct Rejection {
    RejectCode code;
    std::string detail;
};

// Minimal expected-like holder for pipeline stages.
template <typename T>
class Rejected {
public:
    Rejected(T value) : state_(std::move(value)) {}
    Rejected(Rejection rejection) : state_(std::move(rejection)) {}

    bool ok() const { return std::holds_alternative<T>(state_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(state_); }
    T& value() & { return std::get<T>(state_); }
    T&& value() && { return std::get<T>(std::move(state_)); }

    const Rejection& rejection() const { return std::get<Rejection>(state_); }

private:
    std::variant<T, Rejection> state_;
};

}  // namespace songprep
