#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fixture_dict.hpp"
#include "midi_builder.hpp"
#include "songprep/rng.hpp"

namespace testsupport {

// Writes `count` small karaoke-style MIDI files (4/4, constant tempo,
// lyric-bearing melody track, 8+ bars) into dir. Deterministic per seed.
inline std::vector<std::string> write_toy_midi_corpus(const std::filesystem::path& dir, int count,
                                                      std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    songprep::Rng rng(seed);
    const auto& pool = lyric_pool();
    std::vector<std::string> paths;

    for (int f = 0; f < count; ++f) {
        MidiFileBuilder midi(480, 1);
        midi.tempo(0, 0, 96 + static_cast<int>(rng.below(48)));
        midi.time_signature(0, 0, 4, 2);

        std::vector<std::string> words(pool);
        rng.shuffle(words);
        const int n_words = 18 + static_cast<int>(rng.below(10));

        static const int durations[] = {240, 320, 480, 960};
        std::int64_t onset = 0;
        int pitch = 56 + static_cast<int>(rng.below(10));
        for (int w = 0; w < n_words; ++w) {
            std::string text = " " + words[w];
            if (w + 1 == n_words) {
                text += ".";
            } else if (rng.real() < 0.15) {
                text += ",";
            }
            midi.lyric(0, onset, text);
            const int notes_here = 1 + static_cast<int>(rng.below(3));
            for (int k = 0; k < notes_here; ++k) {
                const int duration = durations[rng.below(4)];
                pitch += static_cast<int>(rng.below(9)) - 4;
                pitch = std::min(74, std::max(50, pitch));
                midi.note(0, onset, pitch, duration);
                onset += duration;
                if (rng.real() < 0.1) onset += 240;
            }
        }
        // pad to at least nine bars
        while (onset < 9 * 1920) {
            midi.lyric(0, onset, " " + words[n_words + 1 + static_cast<int>(rng.below(20))]);
            midi.note(0, onset, 60 + static_cast<int>(rng.below(8)), 480);
            onset += 960;
        }

        const auto bytes = midi.bytes();
        char name[32];
        std::snprintf(name, sizeof name, "toy%03d.mid", f);
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        paths.push_back(path.string());
    }
    return paths;
}

inline std::string write_fixture_dict(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path path = dir / "cmudict.txt";
    std::ofstream out(path);
    out << kFixtureDictText;
    return path.string();
}

}  // namespace testsupport
