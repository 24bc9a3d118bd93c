#include "songprep/pretraining.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace songprep {

const char* objective_name(Objective o) {
    switch (o) {
        case Objective::WordSMR: return "word-smr";
        case Objective::WordSRR: return "word-srr";
        case Objective::Phrase: return "phrase";
        case Objective::Song: return "song";
        case Objective::CLM: return "clm";
    }
    return "?";
}

std::optional<Objective> objective_from_name(const std::string& name) {
    for (Objective o : {Objective::WordSMR, Objective::WordSRR, Objective::Phrase,
                        Objective::Song, Objective::CLM}) {
        if (name == objective_name(o)) return o;
    }
    return std::nullopt;
}

const char* corrupt_action_name(CorruptAction a) {
    switch (a) {
        case CorruptAction::MaskOut: return "mask";
        case CorruptAction::RandomReplace: return "replace";
        case CorruptAction::KeepOriginal: return "keep";
    }
    return "?";
}

std::int64_t SpanSet::covered_notes() const {
    std::int64_t total = 0;
    for (const auto& s : spans) total += s.note_count;
    return total;
}

void SpanSet::validate(const AlignedSong& song) const {
    int prev_end = 0;
    for (const auto& s : spans) {
        if (s.note_count <= 0 || s.note_start < prev_end ||
            s.note_start + s.note_count > static_cast<int>(song.notes.size())) {
            throw InvalidInputError("span set is not sorted, disjoint and in range");
        }
        prev_end = s.note_start + s.note_count;
    }
}

SpanSet sample_word_level(const SongFeatures& features, const NGramLexicon& lexicon,
                          FeatureFamily family, Rng& rng, const SamplingOptions& options) {
    SpanSet set;
    set.objective = family == FeatureFamily::SMR ? Objective::WordSMR : Objective::WordSRR;
    const auto matches = max_match_sample(features, lexicon, options.word_budget, rng, family);
    for (const auto& m : matches) {
        SampledSpan span;
        span.note_start = m.note_start;
        span.note_count = m.note_count;
        span.family = m.family;
        const double u = rng.real();
        if (u < options.mask_prob) {
            span.action = CorruptAction::MaskOut;
        } else if (u < options.mask_prob + options.replace_prob) {
            span.action = CorruptAction::RandomReplace;
        } else {
            span.action = CorruptAction::KeepOriginal;
        }
        set.spans.push_back(span);
    }
    return set;
}

SpanSet sample_phrase_level(const AlignedSong& song, const PhraseSegmentation& seg, Rng& rng,
                            const SamplingOptions& options) {
    SpanSet set;
    set.objective = Objective::Phrase;

    std::vector<SampledSpan> phrases;
    int start = 0;
    for (int end : seg.endings) {
        SampledSpan span;
        span.note_start = start;
        span.note_count = end - start + 1;
        phrases.push_back(span);
        start = end + 1;
    }

    std::vector<int> order(phrases.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);

    const double need = options.phrase_budget * static_cast<double>(song.notes.size());
    std::int64_t covered = 0;
    for (int idx : order) {
        set.spans.push_back(phrases[idx]);
        covered += phrases[idx].note_count;
        if (static_cast<double>(covered) >= need) break;
    }
    std::sort(set.spans.begin(), set.spans.end(),
              [](const SampledSpan& a, const SampledSpan& b) {
                  return a.note_start < b.note_start;
              });
    return set;
}

SpanSet sample_song_level(const AlignedSong& song, Rng& rng, const SamplingOptions& options) {
    const int notes = static_cast<int>(song.notes.size());
    if (notes < 2) throw InvalidInputError("song-level sampling needs at least two notes");
    const int length = static_cast<int>(
        std::ceil(options.song_budget * static_cast<double>(notes)));
    SpanSet set;
    set.objective = Objective::Song;
    SampledSpan span;
    span.note_count = length;
    span.note_start = static_cast<int>(rng.below(static_cast<std::uint64_t>(notes - length + 1)));
    set.spans.push_back(span);
    return set;
}

namespace {

Token note_token(const AlignedSong& song, int i) {
    const Note& n = song.notes[i];
    return Token::make_note(n.bar, n.position, n.pitch, n.duration, n.tempo,
                            song.word_of_note[i], song.note_phrase[i]);
}

std::vector<Token> word_tokens(const AlignedSong& song) {
    std::vector<Token> tokens;
    tokens.reserve(song.words.size());
    for (std::size_t i = 0; i < song.words.size(); ++i) {
        tokens.push_back(Token::make_word(song.words[i].surface(), static_cast<int>(i),
                                          song.word_phrase[i]));
    }
    return tokens;
}

}  // namespace

Rejected<PretrainSample> build_sample(const AlignedSong& song, const SpanSet& set, Rng& rng,
                                      int max_len) {
    if (set.spans.empty()) throw InvalidInputError("empty objective: span set has no spans");
    set.validate(song);

    PretrainSample sample;
    sample.objective = set.objective;
    sample.spans = set.spans;
    sample.part_a = word_tokens(song);

    // Part B: notes with spans corrupted in place.
    std::size_t span_idx = 0;
    for (int i = 0; i < static_cast<int>(song.notes.size());) {
        if (span_idx < set.spans.size() && i == set.spans[span_idx].note_start) {
            const SampledSpan& span = set.spans[span_idx];
            switch (span.action) {
                case CorruptAction::MaskOut:
                    sample.part_b.push_back(Token::make_special(SpecialKind::MASK));
                    break;
                case CorruptAction::RandomReplace:
                    // Same time slots and alignment ids, pitches redrawn from
                    // the vocal range.
                    for (int j = span.note_start; j < span.note_start + span.note_count; ++j) {
                        Token t = note_token(song, j);
                        t.pitch = 48 + static_cast<int>(rng.below(24));
                        sample.part_b.push_back(std::move(t));
                    }
                    break;
                case CorruptAction::KeepOriginal:
                    for (int j = span.note_start; j < span.note_start + span.note_count; ++j) {
                        sample.part_b.push_back(note_token(song, j));
                    }
                    break;
            }
            i += span.note_count;
            ++span_idx;
        } else {
            sample.part_b.push_back(note_token(song, i));
            ++i;
        }
    }

    // Part C: every sampled span's original notes, order shuffled per sample.
    sample.emission_order.resize(set.spans.size());
    for (std::size_t i = 0; i < set.spans.size(); ++i) {
        sample.emission_order[i] = static_cast<int>(i);
    }
    rng.shuffle(sample.emission_order);
    for (int idx : sample.emission_order) {
        const SampledSpan& span = set.spans[idx];
        sample.part_c.push_back(Token::make_special(SpecialKind::SEP));
        for (int j = span.note_start; j < span.note_start + span.note_count; ++j) {
            sample.target_positions.push_back(static_cast<int>(sample.part_c.size()));
            sample.part_c.push_back(note_token(song, j));
        }
    }

    if (sample.total_len() > max_len) {
        return Rejection{RejectCode::SampleOverflow,
                         std::to_string(sample.total_len()) + " tokens > " +
                             std::to_string(max_len)};
    }
    return sample;
}

Rejected<PretrainSample> build_clm_sample(const AlignedSong& song, int max_len) {
    if (song.notes.empty()) throw InvalidInputError("causal sample needs a note sequence");
    PretrainSample sample;
    sample.objective = Objective::CLM;
    sample.part_a = word_tokens(song);
    sample.part_b.push_back(Token::make_special(SpecialKind::BOS));
    for (int i = 0; i < static_cast<int>(song.notes.size()); ++i) {
        sample.target_positions.push_back(static_cast<int>(sample.part_c.size()));
        sample.part_c.push_back(note_token(song, i));
    }
    sample.target_positions.push_back(static_cast<int>(sample.part_c.size()));
    sample.part_c.push_back(Token::make_special(SpecialKind::EOS));
    if (sample.total_len() > max_len) {
        return Rejection{RejectCode::SampleOverflow,
                         std::to_string(sample.total_len()) + " tokens > " +
                             std::to_string(max_len)};
    }
    return sample;
}

AttentionMaskSpec::AttentionMaskSpec(int context_len, int target_len)
    : context_len_(context_len), target_len_(target_len) {
    if (context_len < 0 || target_len < 0 || context_len + target_len == 0) {
        throw InvalidInputError("attention mask needs a non-empty sequence");
    }
}

bool AttentionMaskSpec::allowed(int row, int col) const {
    if (row < 0 || col < 0 || row >= size() || col >= size()) {
        throw InvalidInputError("attention mask index out of range");
    }
    if (row < context_len_) return col < context_len_;
    return col < context_len_ || col <= row;
}

Eigen::MatrixXd AttentionMaskSpec::bias() const {
    const int n = size();
    Eigen::MatrixXd m(n, n);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = allowed(i, j) ? 0.0 : neg_inf;
    }
    return m;
}

AttentionMaskSpec attention_mask(const PretrainSample& sample) {
    return AttentionMaskSpec(sample.context_len(), static_cast<int>(sample.part_c.size()));
}

Eigen::MatrixXd masked_attention_weights(const Eigen::MatrixXd& scores,
                                         const Eigen::MatrixXd& bias) {
    if (scores.rows() != scores.cols() || scores.rows() != bias.rows() ||
        scores.cols() != bias.cols()) {
        throw InvalidInputError("masked_attention_weights: dimension mismatch");
    }
    Eigen::MatrixXd weights(scores.rows(), scores.cols());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        double row_max = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < scores.cols(); ++j) {
            if (bias(i, j) == 0.0) row_max = std::max(row_max, scores(i, j));
        }
        if (!std::isfinite(row_max)) {
            throw MaskError("row " + std::to_string(i) + " forbids every column");
        }
        double denom = 0.0;
        for (Eigen::Index j = 0; j < scores.cols(); ++j) {
            const double w = bias(i, j) == 0.0 ? std::exp(scores(i, j) - row_max) : 0.0;
            weights(i, j) = w;
            denom += w;
        }
        weights.row(i) /= denom;
    }
    return weights;
}

Eigen::MatrixXd masked_attention_weights(const Eigen::MatrixXd& scores,
                                         const AttentionMaskSpec& mask) {
    if (scores.rows() != mask.size()) {
        throw InvalidInputError("masked_attention_weights: scores do not match the mask");
    }
    return masked_attention_weights(scores, mask.bias());
}

double span_nll(const std::vector<double>& probabilities, const PretrainSample& sample) {
    if (probabilities.size() != sample.target_positions.size()) {
        throw InvalidInputError("span_nll: need one probability per target token (" +
                                std::to_string(sample.target_positions.size()) + ", got " +
                                std::to_string(probabilities.size()) + ")");
    }
    double nll = 0.0;
    for (double p : probabilities) {
        if (!(p > 0.0) || p > 1.0) {
            throw InvalidInputError("span_nll: probabilities must lie in (0,1]");
        }
        nll -= std::log(p);
    }
    return nll;
}

BatchResult make_batches(const std::vector<AlignedSong>& songs,
                         const std::vector<SongFeatures>& features, const NGramLexicon* lexicon,
                         const std::vector<Objective>& objectives, std::uint64_t master_seed,
                         int max_len, const SamplingOptions& options,
                         const PhraseOptions& phrase_options) {
    bool needs_features = false;
    for (Objective o : objectives) {
        if (o == Objective::WordSMR || o == Objective::WordSRR) {
            needs_features = true;
            if (lexicon == nullptr) {
                throw InvalidInputError("word-level objectives need a lexicon");
            }
        }
    }
    if (needs_features && features.size() != songs.size()) {
        throw InvalidInputError("word-level objectives need per-song features");
    }

    BatchResult result;
    result.master_seed = master_seed;
    for (std::size_t si = 0; si < songs.size(); ++si) {
        const AlignedSong& song = songs[si];
        for (std::size_t oi = 0; oi < objectives.size(); ++oi) {
            const Objective objective = objectives[oi];
            ObjectiveStats& stats = result.stats[objective_name(objective)];
            const std::uint64_t seed = derive_seed(master_seed, si * 8 + oi);
            Rng rng(seed);

            Rejected<PretrainSample> built = [&]() -> Rejected<PretrainSample> {
                switch (objective) {
                    case Objective::WordSMR:
                    case Objective::WordSRR: {
                        const FeatureFamily family = objective == Objective::WordSMR
                                                         ? FeatureFamily::SMR
                                                         : FeatureFamily::SRR;
                        SpanSet set =
                            sample_word_level(features[si], *lexicon, family, rng, options);
                        if (set.spans.empty()) {
                            ++stats.skipped_no_match;
                            return Rejection{RejectCode::EmptyObjective, "no lexicon match"};
                        }
                        return build_sample(song, set, rng, max_len);
                    }
                    case Objective::Phrase: {
                        const PhraseSegmentation seg = recognize_phrases(song, phrase_options);
                        return build_sample(song, sample_phrase_level(song, seg, rng, options),
                                            rng, max_len);
                    }
                    case Objective::Song:
                        return build_sample(song, sample_song_level(song, rng, options), rng,
                                            max_len);
                    case Objective::CLM:
                        return build_clm_sample(song, max_len);
                }
                throw InvalidInputError("unknown objective");
            }();

            if (!built) {
                if (built.rejection().code == RejectCode::SampleOverflow) {
                    ++stats.skipped_overflow;
                }
                continue;
            }
            PretrainSample sample = std::move(built).value();
            sample.seed = seed;
            ++stats.samples;
            stats.song_notes += static_cast<std::int64_t>(song.notes.size());
            for (const auto& span : sample.spans) {
                stats.covered_notes += span.note_count;
                ++stats.actions[static_cast<int>(span.action)];
            }
            result.samples.push_back(std::move(sample));
        }
    }
    return result;
}

std::string sample_to_text(const PretrainSample& sample) {
    std::ostringstream out;
    out << "sample objective=" << objective_name(sample.objective) << " seed=" << sample.seed
        << " a=" << sample.part_a.size() << " b=" << sample.part_b.size()
        << " c=" << sample.part_c.size() << "\n";
    out << "spans " << sample.spans.size() << "\n";
    for (const auto& s : sample.spans) {
        out << "span " << s.note_start << ' ' << s.note_count << ' '
            << corrupt_action_name(s.action) << ' '
            << (s.family ? feature_family_name(*s.family) : "-") << "\n";
    }
    out << "order";
    for (int idx : sample.emission_order) out << ' ' << idx;
    out << "\n";
    for (const auto& t : sample.part_a) out << "A " << token_to_line(t) << "\n";
    for (const auto& t : sample.part_b) out << "B " << token_to_line(t) << "\n";
    for (const auto& t : sample.part_c) out << "C " << token_to_line(t) << "\n";
    return out.str();
}

std::string batch_to_text(const BatchResult& batch) {
    std::ostringstream out;
    out << "#songprep-batches v1\n";
    out << "seed " << batch.master_seed << "\n";
    out << "samples " << batch.samples.size() << "\n";
    for (const auto& sample : batch.samples) out << sample_to_text(sample);
    return out.str();
}

}  // namespace songprep
