#include "songprep/errors.hpp"

namespace songprep {

const char* reject_code_name(RejectCode code) {
    switch (code) {
        case RejectCode::NoLyrics: return "no-lyrics";
        case RejectCode::NoWordsInDictionary: return "no-words-in-dictionary";
        case RejectCode::WordRepetition: return "word-repetition";
        case RejectCode::LongShortWords: return "long-short-words";
        case RejectCode::NotFourFour: return "not-4-4";
        case RejectCode::TempoChange: return "tempo-change";
        case RejectCode::NoNotes: return "no-notes";
        case RejectCode::TooFewBars: return "min-bars";
        case RejectCode::TooManyBars: return "max-bars";
        case RejectCode::DegenerateAlignment: return "degenerate-alignment";
        case RejectCode::TooManyWords: return "max-words";
        case RejectCode::TooManyPhrases: return "max-phrases";
        case RejectCode::SampleOverflow: return "sample-overflow";
        case RejectCode::EmptyObjective: return "empty-objective";
    }
    return "?";
}

}  // namespace songprep
