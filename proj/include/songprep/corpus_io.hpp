#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "songprep/song.hpp"

namespace songprep {

struct CorpusFile {
    std::vector<AlignedSong> songs;
    std::vector<std::string> names;  // parallel to songs; metadata only
};

std::string corpus_to_text(const CorpusFile& corpus);
CorpusFile corpus_from_text(const std::string& text);

void write_corpus(const CorpusFile& corpus, const std::string& path);
CorpusFile read_corpus(const std::string& path);

// Per-corpus text vocabulary: bare words sorted by descending frequency,
// ties alphabetical.
std::vector<std::pair<std::string, std::int64_t>> text_vocabulary(
    const std::vector<AlignedSong>& songs);

// Sidecar with the index table of every attribute (regular values first,
// then the None sentinel and the five special symbols) plus the corpus text
// vocabulary.
std::string vocab_sidecar_text(const std::vector<AlignedSong>& songs);

}  // namespace songprep
