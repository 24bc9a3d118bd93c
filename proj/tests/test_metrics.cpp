#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "songprep/errors.hpp"
#include "songprep/metrics.hpp"
#include "songprep/vocab.hpp"
#include "support/oracles.hpp"
#include "support/song_gen.hpp"

using namespace songprep;

namespace {

std::vector<Note> melody(const std::vector<int>& pitches, int duration = 480) {
    std::vector<Note> notes;
    int onset = 0;
    for (int p : pitches) {
        notes.push_back(Note{onset / kTicksPerBar, onset % kTicksPerBar, p, duration,
                             TempoClass::Allegro});
        onset += duration;
    }
    return notes;
}

}  // namespace

TEST_CASE("pitch class histogram") {
    const Histogram all60 = pitch_class_histogram(melody({60, 60, 60}));
    CHECK(all60.mass[0] == 1.0);
    CHECK(all60.mass.sum() == doctest::Approx(1.0).epsilon(1e-12));

    const Histogram two = pitch_class_histogram(melody({60, 61}));
    CHECK(two.mass[0] == 0.5);
    CHECK(two.mass[1] == 0.5);

    CHECK_THROWS_AS(pitch_class_histogram({}), InvalidInputError);

    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> pitches;
        for (int i = 0; i < 12; ++i) pitches.push_back(40 + static_cast<int>(rng.below(40)));
        std::vector<int> transposed;
        for (int p : pitches) transposed.push_back(p + 12);
        const Histogram a = pitch_class_histogram(melody(pitches));
        const Histogram b = pitch_class_histogram(melody(transposed));
        CHECK((a.mass - b.mass).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("duration histogram uses the 69 vocabulary bins") {
    const Histogram quarters = duration_histogram(melody({60, 62, 64}, 480));
    CHECK(quarters.mass.size() == 69);
    const auto& values = duration_values();
    const auto idx480 = std::lower_bound(values.begin(), values.end(), 480) - values.begin();
    CHECK(quarters.mass[idx480] == 1.0);

    auto mixed = melody({60, 62}, 480);
    mixed[1].duration = 240;
    const Histogram h = duration_histogram(mixed);
    const auto idx240 = std::lower_bound(values.begin(), values.end(), 240) - values.begin();
    CHECK(h.mass[idx480] == 0.5);
    CHECK(h.mass[idx240] == 0.5);

    auto bad = melody({60});
    bad[0].duration = 1000;
    CHECK_THROWS_AS(duration_histogram(bad), InvalidInputError);
}

TEST_CASE("IOI histogram bins onset gaps on the union grid") {
    const Histogram h = ioi_histogram(melody({60, 62, 64}, 480));
    const auto& grid = position_values();
    const auto idx480 = std::upper_bound(grid.begin(), grid.end(), 480) - grid.begin() - 1;
    CHECK(h.mass[idx480] == 1.0);

    CHECK_THROWS_AS(ioi_histogram(melody({60})), InvalidInputError);

    // onsets 0, 480, 1200: gaps 480 and 720
    std::vector<Note> notes = melody({60, 62}, 480);
    notes.push_back(Note{0, 1200, 64, 480, TempoClass::Allegro});
    const Histogram mixed = ioi_histogram(notes);
    const auto idx720 = std::upper_bound(grid.begin(), grid.end(), 720) - grid.begin() - 1;
    CHECK(mixed.mass[idx480] == 0.5);
    CHECK(mixed.mass[idx720] == 0.5);

    // a gap of a bar or more lands in the overflow bin
    std::vector<Note> wide = melody({60}, 480);
    wide.push_back(Note{1, 480, 62, 480, TempoClass::Allegro});
    const Histogram overflow = ioi_histogram(wide);
    CHECK(overflow.mass[overflow.mass.size() - 1] == 1.0);
}

TEST_CASE("alignment histogram counts notes per word") {
    AlignedSong song;
    song.words = {Word{"hello", {"hello"}, ""}, Word{"world", {"world"}, ""}};
    song.notes = melody({60, 62, 64, 65});
    song.word_of_note = {0, 1, 1, 1};
    song.word_phrase = {0, 0};
    song.note_phrase = {0, 0, 0, 0};
    const Histogram h = alignment_histogram(song);
    CHECK(h.mass[0] == 0.5);  // one word with 1 note
    CHECK(h.mass[2] == 0.5);  // one word with 3 notes

    // words beyond 16 notes collapse into the last bin
    AlignedSong wide;
    wide.words = {Word{"oh", {"oh"}, ""}};
    wide.notes = melody(std::vector<int>(20, 60), 120);
    wide.word_of_note.assign(20, 0);
    wide.word_phrase = {0};
    wide.note_phrase.assign(20, 0);
    const Histogram wide_h = alignment_histogram(wide);
    CHECK(wide_h.mass[15] == 1.0);
}

TEST_CASE("overlapped area") {
    Histogram a, b;
    a.mass = Eigen::Vector3d(0.5, 0.5, 0.0);
    a.normalized = true;
    b.mass = Eigen::Vector3d(0.25, 0.5, 0.25);
    b.normalized = true;
    CHECK(overlapped_area(a, b) == 0.75);
    CHECK(overlapped_area(b, a) == 0.75);  // symmetric
    CHECK(overlapped_area(a, a) == 1.0);

    Histogram disjoint;
    disjoint.mass = Eigen::Vector3d(0.0, 0.0, 1.0);
    disjoint.normalized = true;
    Histogram left;
    left.mass = Eigen::Vector3d(1.0, 0.0, 0.0);
    left.normalized = true;
    CHECK(overlapped_area(disjoint, left) == 0.0);

    Histogram wrong;
    wrong.mass = Eigen::Vector2d(0.5, 0.5);
    wrong.normalized = true;
    CHECK_THROWS_AS(overlapped_area(a, wrong), InvalidInputError);
    Histogram raw;
    raw.mass = Eigen::Vector3d(1, 1, 1);
    raw.normalized = false;
    CHECK_THROWS_AS(overlapped_area(a, raw), InvalidInputError);
}

TEST_CASE("pitch time series holds pitches through rests and centres the mean") {
    std::vector<Note> notes = {Note{0, 0, 60, 30, TempoClass::Allegro},
                               Note{0, 60, 64, 30, TempoClass::Allegro}};
    // sounding span 0..90, samples at 0,10,...,80; rest 30..60 holds pitch 60
    const auto series = pitch_time_series(notes);
    REQUIRE(series.size() == 9);
    double sum = 0.0;
    for (double v : series) sum += v;
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-9));
    // first six samples sit on/hold the first pitch, last three the second
    for (int i = 0; i < 6; ++i) CHECK(series[i] == series[0]);
    for (int i = 6; i < 9; ++i) CHECK(series[i] == series[6]);
    CHECK(series[6] - series[0] == 4.0);
}

TEST_CASE("melody distance: identity and transposition invariance") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const AlignedSong song = testsupport::random_song(rng, 4, 10);
        CHECK(melody_distance(song.notes, song.notes) == 0.0);

        std::vector<Note> transposed = song.notes;
        for (Note& n : transposed) n.pitch += 7;
        CHECK(melody_distance(song.notes, transposed) <= 1e-9);
        CHECK(melody_distance(transposed, song.notes) ==
              doctest::Approx(melody_distance(song.notes, transposed)).epsilon(1e-12));
    }
}

TEST_CASE("melody distance equals exhaustive path enumeration on toy melodies") {
    // 3-note melodies, 10-tick notes: the series is exactly the 3 pitches
    auto toy = [](int a, int b, int c) {
        std::vector<Note> notes;
        notes.push_back(Note{0, 0, a, 10, TempoClass::Allegro});
        notes.push_back(Note{0, 10, b, 10, TempoClass::Allegro});
        notes.push_back(Note{0, 20, c, 10, TempoClass::Allegro});
        return notes;
    };
    Rng rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = toy(60 + static_cast<int>(rng.below(5)), 60 + static_cast<int>(rng.below(5)),
                           60 + static_cast<int>(rng.below(5)));
        const auto r = toy(60 + static_cast<int>(rng.below(5)), 60 + static_cast<int>(rng.below(5)),
                           60 + static_cast<int>(rng.below(5)));
        const double got = melody_distance(g, r);
        const double expected =
            testsupport::oracle_dtw(pitch_time_series(g), pitch_time_series(r));
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("evaluate: self-comparison is the perfect report") {
    const auto corpus = testsupport::random_corpus(42, 10);
    const MetricReport report = evaluate(corpus, corpus);
    CHECK(report.pairs == 10);
    CHECK(report.alignment.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.pitch.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.duration.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.ioi.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.melody.mean == 0.0);
    CHECK(report.melody.sd == 0.0);
}

TEST_CASE("evaluate rejects empty and mismatched sets") {
    const auto corpus = testsupport::random_corpus(42, 3);
    CHECK_THROWS_AS(evaluate({}, {}), InvalidInputError);
    CHECK_THROWS_AS(evaluate(corpus, {corpus[0]}), InvalidInputError);

    auto other = corpus;
    other[1].words[0].text = "changed";
    CHECK_THROWS_AS(evaluate(other, corpus), InvalidInputError);
}

TEST_CASE("evaluate matches a hand computation on a toy pair") {
    AlignedSong ref;
    ref.words = {Word{"hello", {"hello"}, ""}, Word{"world", {"world"}, ""}};
    ref.notes = melody({60, 60, 64, 64});
    ref.word_of_note = {0, 0, 1, 1};
    ref.word_phrase = {0, 0};
    ref.note_phrase = {0, 0, 0, 0};

    AlignedSong gen = ref;
    gen.notes[3].pitch = 67;        // pitch histogram overlap drops to 3/4
    gen.word_of_note = {0, 1, 1, 1};  // alignment 1+3 vs 2+2

    const MetricReport report = evaluate({gen}, {ref});
    CHECK(report.pitch.mean == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(report.duration.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.ioi.mean == doctest::Approx(1.0).epsilon(1e-12));
    // alignment histograms: gen {1 note, 3 notes}, ref {2, 2}: no overlap
    CHECK(report.alignment.mean == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.melody.mean > 0.0);
}

TEST_CASE("aggregate_runs averages run means") {
    const auto corpus = testsupport::random_corpus(43, 4);
    auto tweak = [&](int delta) {
        auto c = corpus;
        for (auto& song : c) {
            for (auto& n : song.notes) n.pitch = std::min(127, n.pitch + delta);
        }
        return c;
    };
    const MetricReport r1 = evaluate(tweak(1), corpus);
    const MetricReport r2 = evaluate(tweak(2), corpus);
    const MetricReport agg = aggregate_runs({r1, r2});
    CHECK(agg.pitch.mean == doctest::Approx((r1.pitch.mean + r2.pitch.mean) / 2).epsilon(1e-12));
    CHECK(agg.melody.mean ==
          doctest::Approx((r1.melody.mean + r2.melody.mean) / 2).epsilon(1e-12));
}
