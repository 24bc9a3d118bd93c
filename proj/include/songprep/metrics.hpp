#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "songprep/song.hpp"

namespace songprep {

struct Histogram {
    Eigen::VectorXd mass;
    bool normalized = false;
};

// 12 bins over pitch mod 12, normalized by note count.
Histogram pitch_class_histogram(const std::vector<Note>& notes);

// One bin per duration-vocabulary value (69). Off-grid durations throw.
Histogram duration_histogram(const std::vector<Note>& notes);

// Inter-onset intervals bucketed on the union time grid: gap d lands in the
// cell [g_i, g_{i+1}) of the grid {0} + positions, with one overflow bin for
// a bar or more. Needs at least two notes.
Histogram ioi_histogram(const std::vector<Note>& notes);

// Notes-per-word distribution over N = 1..16; the last bin also collects
// words with more than 16 notes.
Histogram alignment_histogram(const AlignedSong& song);

// Sum of binwise minima of two normalized histograms with identical bin
// structure; 1 iff the histograms are equal.
double overlapped_area(const Histogram& a, const Histogram& b);

// DTW distance between mean-centred pitch time series sampled every 10
// ticks over each melody's sounding duration (rests hold the previous
// pitch). Cost is the squared pitch difference with symmetric unit moves;
// the result is sqrt(optimal cost) divided by the length of the shortest
// optimal warping path. Invariant under transposing either melody.
double melody_distance(const std::vector<Note>& generated, const std::vector<Note>& reference);

// The expanded series itself (exposed for tests and inspection).
std::vector<double> pitch_time_series(const std::vector<Note>& notes, int granularity = 10);

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation across pairs
    std::vector<double> per_pair;
};

struct MetricReport {
    int pairs = 0;
    MetricSummary alignment;  // D_A
    MetricSummary pitch;      // D_P
    MetricSummary duration;   // D_D
    MetricSummary ioi;        // D_IOI
    MetricSummary melody;     // MD

    std::string to_text() const;
};

// Pairwise evaluation of a generated corpus against its reference (same
// order, same lyrics). Throws InvalidInputError on empty or mismatched sets.
MetricReport evaluate(const std::vector<AlignedSong>& generated,
                      const std::vector<AlignedSong>& reference);

// Mean-of-means with across-run standard deviation, for repeated-run
// aggregation over seeds.
MetricReport aggregate_runs(const std::vector<MetricReport>& runs);

}  // namespace songprep
