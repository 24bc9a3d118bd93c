#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "songprep/errors.hpp"
#include "songprep/ngram.hpp"
#include "songprep/phrase.hpp"
#include "songprep/rng.hpp"
#include "songprep/song.hpp"

namespace songprep {

enum class Objective { WordSMR, WordSRR, Phrase, Song, CLM };

const char* objective_name(Objective o);
std::optional<Objective> objective_from_name(const std::string& name);

enum class CorruptAction { MaskOut, RandomReplace, KeepOriginal };

const char* corrupt_action_name(CorruptAction a);

struct SampledSpan {
    int note_start = 0;
    int note_count = 0;
    CorruptAction action = CorruptAction::MaskOut;
    std::optional<FeatureFamily> family;  // word-level spans only
};

struct SpanSet {
    Objective objective = Objective::Song;
    std::vector<SampledSpan> spans;  // disjoint, sorted by note_start

    std::int64_t covered_notes() const;
    void validate(const AlignedSong& song) const;
};

struct SamplingOptions {
    double word_budget = 0.15;
    double phrase_budget = 0.5;
    double song_budget = 0.5;
    double mask_prob = 0.8;
    double replace_prob = 0.1;  // keep_prob is the remainder
};

// Word level: maximum matching against the family's lexicon at the 15%
// budget; every accepted span draws its corruption action with probabilities
// 0.8 / 0.1 / 0.1. An empty result means nothing matched; callers skip the
// sample and log the reason.
SpanSet sample_word_level(const SongFeatures& features, const NGramLexicon& lexicon,
                          FeatureFamily family, Rng& rng, const SamplingOptions& options = {});

// Phrase level: whole phrases drawn uniformly without replacement until the
// covered note count first reaches 50% of the song.
SpanSet sample_phrase_level(const AlignedSong& song, const PhraseSegmentation& seg, Rng& rng,
                            const SamplingOptions& options = {});

// Song level: one contiguous span of ceil(50%) of the notes at a uniformly
// random start. Requires at least two notes.
SpanSet sample_song_level(const AlignedSong& song, Rng& rng,
                          const SamplingOptions& options = {});

// One training example. Part A is the word sequence, part B the corrupted
// note sequence (each masked-out span collapsed to one <MASK>), part C the
// original content of every sampled span behind a <SEP>, in an order
// shuffled per sample. Tokens carry their own word/phrase ids; special
// tokens carry their sentinel.
struct PretrainSample {
    Objective objective = Objective::Song;
    std::uint64_t seed = 0;
    std::vector<Token> part_a;
    std::vector<Token> part_b;
    std::vector<Token> part_c;
    std::vector<SampledSpan> spans;      // original order (sorted by note_start)
    std::vector<int> emission_order;     // indices into spans, part_c order
    std::vector<int> target_positions;   // part_c positions that are prediction targets

    int context_len() const { return static_cast<int>(part_a.size() + part_b.size()); }
    int total_len() const { return context_len() + static_cast<int>(part_c.size()); }
};

inline constexpr int kDefaultMaxSampleLen = 768;

// Assembles the A/B/C layout for a span set. Throws InvalidInputError on an
// empty objective; returns a SampleOverflow rejection past max_len.
Rejected<PretrainSample> build_sample(const AlignedSong& song, const SpanSet& spans, Rng& rng,
                                      int max_len = kDefaultMaxSampleLen);

// Causal layout for fine-tuning: part A words, part B a lone <BOS>, part C
// the full note sequence plus <EOS>, all of part C being targets.
Rejected<PretrainSample> build_clm_sample(const AlignedSong& song,
                                          int max_len = kDefaultMaxSampleLen);

// Additive attention bias: bidirectional over A and B, causal over C.
class AttentionMaskSpec {
public:
    AttentionMaskSpec(int context_len, int target_len);

    int context_len() const { return context_len_; }
    int target_len() const { return target_len_; }
    int size() const { return context_len_ + target_len_; }

    bool allowed(int row, int col) const;

    // 0 where attention is allowed, -inf where it is prevented.
    Eigen::MatrixXd bias() const;

private:
    int context_len_;
    int target_len_;
};

AttentionMaskSpec attention_mask(const PretrainSample& sample);

// Row-wise softmax of scores + bias; forbidden entries come out exactly 0.
// A row with every entry forbidden throws MaskError.
Eigen::MatrixXd masked_attention_weights(const Eigen::MatrixXd& scores,
                                         const Eigen::MatrixXd& bias);
Eigen::MatrixXd masked_attention_weights(const Eigen::MatrixXd& scores,
                                         const AttentionMaskSpec& mask);

// Negative log-likelihood of the sample's targets given externally supplied
// per-token probabilities (one per target, SEP delimiters excluded). The
// multi-task total is the plain sum of this value over objective samples.
double span_nll(const std::vector<double>& probabilities, const PretrainSample& sample);

struct ObjectiveStats {
    std::int64_t samples = 0;
    std::int64_t skipped_no_match = 0;
    std::int64_t skipped_overflow = 0;
    std::int64_t covered_notes = 0;
    std::int64_t song_notes = 0;
    std::int64_t actions[3] = {0, 0, 0};  // indexed by CorruptAction

    double coverage() const {
        return song_notes ? static_cast<double>(covered_notes) / static_cast<double>(song_notes)
                          : 0.0;
    }
};

struct BatchResult {
    std::vector<PretrainSample> samples;
    std::map<std::string, ObjectiveStats> stats;  // keyed by objective name
    std::uint64_t master_seed = 0;
};

// One sample per (song, objective), objectives interleaved per song, with
// per-sample seeds derived from the master seed. The lexicon may be null
// when no word-level objective is requested.
BatchResult make_batches(const std::vector<AlignedSong>& songs,
                         const std::vector<SongFeatures>& features, const NGramLexicon* lexicon,
                         const std::vector<Objective>& objectives, std::uint64_t master_seed,
                         int max_len = kDefaultMaxSampleLen, const SamplingOptions& options = {},
                         const PhraseOptions& phrase_options = {});

std::string sample_to_text(const PretrainSample& sample);
std::string batch_to_text(const BatchResult& batch);

}  // namespace songprep
