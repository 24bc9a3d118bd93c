#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "songprep/features.hpp"
#include "songprep/rng.hpp"
#include "songprep/song.hpp"

namespace songprep {

// Joint n-gram patterns pair the stress segments of n consecutive words with
// the feature flags of their aligned notes. Both sides keep word-boundary
// markers ('|'), so a 2-word pattern over 3 notes differs from a 3-word one.
struct JointNGram {
    int n = 0;
    std::string lyric_pattern;
    std::string melodic_pattern;
    FeatureFamily family = FeatureFamily::SMR;
    std::int64_t count = 0;
};

// Corpus-wide pattern statistics for one feature family. Ordered maps keep
// every downstream artifact deterministic.
struct NGramCounts {
    FeatureFamily family = FeatureFamily::SMR;
    int min_n = 2;
    int max_n = 12;
    std::map<std::string, std::map<std::string, std::int64_t>> joint;  // melodic -> lyric -> count
    std::map<std::string, std::int64_t> melodic;
    std::map<std::string, std::int64_t> lyric;
    std::map<std::string, std::int64_t> melodic_unigram;
    std::map<std::string, std::int64_t> lyric_unigram;
    std::vector<std::int64_t> windows;  // windows[n] = word windows of length n
};

NGramCounts count_joint_ngrams(const std::vector<SongFeatures>& corpus, FeatureFamily family,
                               int min_n = 2, int max_n = 12);

// Flat view of the joint multiset with aggregated counts.
std::vector<JointNGram> enumerate_joint_ngrams(const std::vector<SongFeatures>& corpus,
                                               FeatureFamily family, int min_n = 2,
                                               int max_n = 12);

// Collocation t-score against the independence null: with p_hat =
// count/total and p0 the product of the unigram probabilities,
//   t = (p_hat - p0) / sqrt(p_hat (1 - p_hat) / total).
// A pattern owning every window (p_hat = 1) yields +/-inf; callers compare
// such scores as equal. total = 0 throws InvalidInputError.
double t_statistic(std::int64_t count, std::int64_t total,
                   const std::vector<double>& unigram_probs);

struct RelationshipScore {
    double s_lm = 0.0;
    double concentration = 1.0;  // C: 1 when m = 1, else 1 - H_norm
    double h_norm = 0.0;         // normalized entropy of the lyric-pattern distribution
};

// lyric_scores holds s_l per distinct associated lyric pattern, probs their
// occurrence probabilities (must sum to 1 within 1e-6).
RelationshipScore relationship_score(const std::vector<double>& lyric_scores,
                                     const std::vector<double>& probs);

struct LexiconEntry {
    std::string melodic_pattern;
    int n = 0;
    std::int64_t count = 0;
    double s_l_mean = 0.0;
    double s_m = 0.0;
    double s_lm = 0.0;
    double s = 0.0;
};

struct FamilyLexicon {
    FeatureFamily family = FeatureFamily::SMR;
    double cutoff = 0.25;
    std::uint64_t corpus_hash = 0;
    std::int64_t candidate_count = 0;
    std::int64_t window_total = 0;
    std::vector<LexiconEntry> entries;  // descending s; ties by count desc, pattern asc

    bool contains(const std::string& melodic_pattern) const {
        return index_.count(melodic_pattern) > 0;
    }
    const LexiconEntry& at(const std::string& melodic_pattern) const;
    void rebuild_index();

private:
    std::map<std::string, std::size_t> index_;
};

struct NGramLexicon {
    FamilyLexicon smr;
    FamilyLexicon srr;

    const FamilyLexicon& of(FeatureFamily f) const {
        return f == FeatureFamily::SMR ? smr : srr;
    }
    FamilyLexicon& of(FeatureFamily f) { return f == FeatureFamily::SMR ? smr : srr; }
};

// Scores every melodic pattern (s = s_m + s_lm) and keeps the top 25% per
// family. Throws Error when the corpus yields no candidates.
NGramLexicon build_lexicon(const std::vector<SongFeatures>& corpus, double cutoff = 0.25,
                           int min_n = 2, int max_n = 12);

// Song-level entry point: computes features, then stamps the corpus hash.
NGramLexicon build_lexicon(const std::vector<AlignedSong>& songs,
                           const PronouncingDictionary& dict, double cutoff = 0.25, int min_n = 2,
                           int max_n = 12);

// Maximum matching against the lexicon: random unvisited start words, the
// longest matching pattern wins (SMR preferred over SRR on equal length),
// spans stay disjoint, and sampling stops once the accepted note total
// reaches budget * note_count or all starts are exhausted.
struct MatchSpan {
    int word_start = 0;
    int n_words = 0;
    int note_start = 0;
    int note_count = 0;
    FeatureFamily family = FeatureFamily::SMR;
};

std::vector<MatchSpan> max_match_sample(const SongFeatures& features, const NGramLexicon& lexicon,
                                        double budget, Rng& rng,
                                        std::optional<FeatureFamily> only_family = std::nullopt);

std::string lexicon_to_text(const FamilyLexicon& lexicon);
FamilyLexicon lexicon_from_text(const std::string& text);

void save_lexicon(const FamilyLexicon& lexicon, const std::string& path);
FamilyLexicon load_lexicon(const std::string& path);

}  // namespace songprep
