#include "songprep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "songprep/errors.hpp"
#include "songprep/vocab.hpp"

namespace songprep {

Histogram pitch_class_histogram(const std::vector<Note>& notes) {
    if (notes.empty()) throw InvalidInputError("pitch_class_histogram: empty melody");
    Histogram h;
    h.mass = Eigen::VectorXd::Zero(12);
    for (const Note& n : notes) h.mass[n.pitch % 12] += 1.0;
    h.mass /= static_cast<double>(notes.size());
    h.normalized = true;
    return h;
}

Histogram duration_histogram(const std::vector<Note>& notes) {
    if (notes.empty()) throw InvalidInputError("duration_histogram: empty melody");
    const auto& values = duration_values();
    Histogram h;
    h.mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(values.size()));
    for (const Note& n : notes) {
        const auto it = std::lower_bound(values.begin(), values.end(), n.duration);
        if (it == values.end() || *it != n.duration) {
            throw InvalidInputError("duration_histogram: off-grid duration " +
                                    std::to_string(n.duration));
        }
        h.mass[it - values.begin()] += 1.0;
    }
    h.mass /= static_cast<double>(notes.size());
    h.normalized = true;
    return h;
}

Histogram ioi_histogram(const std::vector<Note>& notes) {
    if (notes.size() < 2) throw InvalidInputError("ioi_histogram: needs at least two notes");
    const auto& grid = position_values();  // {0, 30, 40, ...}, 96 cells
    Histogram h;
    h.mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()) + 1);
    for (std::size_t i = 1; i < notes.size(); ++i) {
        const int gap = static_cast<int>(notes[i].onset() - notes[i - 1].onset());
        if (gap < 0) throw InvalidInputError("ioi_histogram: notes not sorted by onset");
        Eigen::Index bin;
        if (gap >= kTicksPerBar) {
            bin = h.mass.size() - 1;  // overflow
        } else {
            bin = std::upper_bound(grid.begin(), grid.end(), gap) - grid.begin() - 1;
        }
        h.mass[bin] += 1.0;
    }
    h.mass /= static_cast<double>(notes.size() - 1);
    h.normalized = true;
    return h;
}

Histogram alignment_histogram(const AlignedSong& song) {
    constexpr int kCap = 16;
    Histogram h;
    h.mass = Eigen::VectorXd::Zero(kCap);
    const auto ranges = notes_per_word(song);
    for (const auto& r : ranges) {
        const int bin = std::min(r.count, kCap) - 1;
        h.mass[bin] += 1.0;
    }
    h.mass /= static_cast<double>(ranges.size());
    h.normalized = true;
    return h;
}

double overlapped_area(const Histogram& a, const Histogram& b) {
    if (a.mass.size() != b.mass.size()) {
        throw InvalidInputError("overlapped_area: histograms have different bin structures");
    }
    if (!a.normalized || !b.normalized) {
        throw InvalidInputError("overlapped_area: histograms must be normalized");
    }
    return a.mass.cwiseMin(b.mass).sum();
}

std::vector<double> pitch_time_series(const std::vector<Note>& notes, int granularity) {
    if (notes.empty()) throw InvalidInputError("pitch_time_series: empty melody");
    const std::int64_t begin = notes.front().onset();
    std::int64_t end = 0;
    for (const Note& n : notes) end = std::max<std::int64_t>(end, n.end());

    std::vector<double> series;
    series.reserve(static_cast<std::size_t>((end - begin) / granularity) + 1);
    std::size_t current = 0;
    for (std::int64_t t = begin; t < end; t += granularity) {
        // Latest note starting at or before t; rests hold its pitch.
        while (current + 1 < notes.size() && notes[current + 1].onset() <= t) ++current;
        series.push_back(static_cast<double>(notes[current].pitch));
    }
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    for (double& v : series) v -= mean;
    return series;
}

double melody_distance(const std::vector<Note>& generated, const std::vector<Note>& reference) {
    const std::vector<double> a = pitch_time_series(generated);
    const std::vector<double> b = pitch_time_series(reference);
    const Eigen::Index n = static_cast<Eigen::Index>(a.size());
    const Eigen::Index m = static_cast<Eigen::Index>(b.size());

    // cost(i,j): minimal accumulated squared difference; cells(i,j): fewest
    // cells on any optimal path, which fixes the normalization
    // deterministically.
    Eigen::MatrixXd cost(n, m);
    Eigen::MatrixXi cells(n, m);
    auto d = [&](Eigen::Index i, Eigen::Index j) {
        const double diff = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)];
        return diff * diff;
    };
    cost(0, 0) = d(0, 0);
    cells(0, 0) = 1;
    for (Eigen::Index i = 1; i < n; ++i) {
        cost(i, 0) = cost(i - 1, 0) + d(i, 0);
        cells(i, 0) = cells(i - 1, 0) + 1;
    }
    for (Eigen::Index j = 1; j < m; ++j) {
        cost(0, j) = cost(0, j - 1) + d(0, j);
        cells(0, j) = cells(0, j - 1) + 1;
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        for (Eigen::Index j = 1; j < m; ++j) {
            const double best =
                std::min(cost(i - 1, j - 1), std::min(cost(i - 1, j), cost(i, j - 1)));
            int fewest = std::numeric_limits<int>::max();
            if (cost(i - 1, j - 1) == best) fewest = std::min(fewest, cells(i - 1, j - 1));
            if (cost(i - 1, j) == best) fewest = std::min(fewest, cells(i - 1, j));
            if (cost(i, j - 1) == best) fewest = std::min(fewest, cells(i, j - 1));
            cost(i, j) = best + d(i, j);
            cells(i, j) = fewest + 1;
        }
    }
    return std::sqrt(cost(n - 1, m - 1)) / static_cast<double>(cells(n - 1, m - 1));
}

namespace {

MetricSummary summarize(std::vector<double> values) {
    MetricSummary s;
    s.per_pair = std::move(values);
    if (s.per_pair.empty()) return s;
    for (double v : s.per_pair) s.mean += v;
    s.mean /= static_cast<double>(s.per_pair.size());
    double var = 0.0;
    for (double v : s.per_pair) var += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(var / static_cast<double>(s.per_pair.size()));
    return s;
}

std::string cell(double mean, double sd, bool percent) {
    char buf[64];
    if (percent) {
        std::snprintf(buf, sizeof buf, "%.2f +- %.2f", mean * 100.0, sd * 100.0);
    } else {
        std::snprintf(buf, sizeof buf, "%.2f +- %.2f", mean, sd);
    }
    return buf;
}

}  // namespace

std::string MetricReport::to_text() const {
    std::ostringstream out;
    out << "pairs " << pairs << "\n";
    out << "D_A(%)   " << cell(alignment.mean, alignment.sd, true) << "\n";
    out << "D_P(%)   " << cell(pitch.mean, pitch.sd, true) << "\n";
    out << "D_D(%)   " << cell(duration.mean, duration.sd, true) << "\n";
    out << "D_IOI(%) " << cell(ioi.mean, ioi.sd, true) << "\n";
    out << "MD       " << cell(melody.mean, melody.sd, false) << "\n";
    return out.str();
}

MetricReport evaluate(const std::vector<AlignedSong>& generated,
                      const std::vector<AlignedSong>& reference) {
    if (generated.empty() || reference.empty()) {
        throw InvalidInputError("evaluate: empty corpus");
    }
    if (generated.size() != reference.size()) {
        throw InvalidInputError("evaluate: set sizes differ (" +
                                std::to_string(generated.size()) + " vs " +
                                std::to_string(reference.size()) + ")");
    }
    std::vector<double> d_a, d_p, d_d, d_ioi, md;
    for (std::size_t i = 0; i < generated.size(); ++i) {
        const AlignedSong& g = generated[i];
        const AlignedSong& r = reference[i];
        if (g.words.size() != r.words.size()) {
            throw InvalidInputError("evaluate: pair " + std::to_string(i) +
                                    " has different lyrics");
        }
        for (std::size_t w = 0; w < g.words.size(); ++w) {
            if (g.words[w].text != r.words[w].text) {
                throw InvalidInputError("evaluate: pair " + std::to_string(i) +
                                        " has different lyrics");
            }
        }
        d_a.push_back(overlapped_area(alignment_histogram(g), alignment_histogram(r)));
        d_p.push_back(overlapped_area(pitch_class_histogram(g.notes),
                                      pitch_class_histogram(r.notes)));
        d_d.push_back(overlapped_area(duration_histogram(g.notes), duration_histogram(r.notes)));
        d_ioi.push_back(overlapped_area(ioi_histogram(g.notes), ioi_histogram(r.notes)));
        md.push_back(melody_distance(g.notes, r.notes));
    }
    MetricReport report;
    report.pairs = static_cast<int>(generated.size());
    report.alignment = summarize(std::move(d_a));
    report.pitch = summarize(std::move(d_p));
    report.duration = summarize(std::move(d_d));
    report.ioi = summarize(std::move(d_ioi));
    report.melody = summarize(std::move(md));
    return report;
}

MetricReport aggregate_runs(const std::vector<MetricReport>& runs) {
    if (runs.empty()) throw InvalidInputError("aggregate_runs: no runs");
    auto collect = [&](auto field) {
        std::vector<double> means;
        for (const auto& r : runs) means.push_back((r.*field).mean);
        return summarize(std::move(means));
    };
    MetricReport out;
    out.pairs = runs.front().pairs;
    out.alignment = collect(&MetricReport::alignment);
    out.pitch = collect(&MetricReport::pitch);
    out.duration = collect(&MetricReport::duration);
    out.ioi = collect(&MetricReport::ioi);
    out.melody = collect(&MetricReport::melody);
    return out;
}

}  // namespace songprep
