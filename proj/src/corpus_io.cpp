#include "songprep/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "songprep/errors.hpp"
#include "songprep/token.hpp"
#include "songprep/vocab.hpp"

namespace songprep {

std::string corpus_to_text(const CorpusFile& corpus) {
    std::ostringstream out;
    out << "#songprep-corpus v1\n";
    out << "songs " << corpus.songs.size() << "\n";
    for (std::size_t i = 0; i < corpus.songs.size(); ++i) {
        const AlignedSong& song = corpus.songs[i];
        std::string name = i < corpus.names.size() ? corpus.names[i] : std::string();
        for (char& c : name) {
            if (std::isspace(static_cast<unsigned char>(c))) c = '_';
        }
        out << "song words=" << song.words.size() << " notes=" << song.notes.size()
            << " phrases=" << song.phrase_count() << " name=" << name << "\n";
        for (const Token& t : encode_song(song)) out << token_to_line(t) << "\n";
    }
    return out.str();
}

CorpusFile corpus_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](std::string& out_line) {
        if (!std::getline(in, out_line)) return false;
        ++line_no;
        return true;
    };
    if (!next_line(line) || line != "#songprep-corpus v1") {
        throw ParseError("bad corpus header", line_no);
    }
    if (!next_line(line) || line.rfind("songs ", 0) != 0) {
        throw ParseError("missing songs count", line_no);
    }
    std::size_t song_count = 0;
    try {
        song_count = std::stoull(line.substr(6));
    } catch (const std::exception&) {
        throw ParseError("bad songs count '" + line.substr(6) + "'", line_no);
    }

    CorpusFile corpus;
    for (std::size_t s = 0; s < song_count; ++s) {
        if (!next_line(line) || line.rfind("song ", 0) != 0) {
            throw ParseError("expected song record", line_no);
        }
        std::size_t words = 0, notes = 0;
        std::string name;
        try {
            std::istringstream fields(line.substr(5));
            std::string field;
            while (fields >> field) {
                if (field.rfind("words=", 0) == 0) {
                    words = std::stoull(field.substr(6));
                } else if (field.rfind("notes=", 0) == 0) {
                    notes = std::stoull(field.substr(6));
                } else if (field.rfind("name=", 0) == 0) {
                    name = field.substr(5);
                }
            }
        } catch (const std::exception&) {
            throw ParseError("bad song record '" + line + "'", line_no);
        }
        std::vector<Token> tokens;
        tokens.reserve(words + notes);
        for (std::size_t t = 0; t < words + notes; ++t) {
            if (!next_line(line)) throw ParseError("corpus truncated", line_no);
            tokens.push_back(token_from_line(line, line_no));
        }
        corpus.songs.push_back(decode_song(tokens));
        corpus.names.push_back(name);
    }
    return corpus;
}

void write_corpus(const CorpusFile& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus file '" + path + "'");
    out << corpus_to_text(corpus);
}

CorpusFile read_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read corpus file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return corpus_from_text(buf.str());
}

std::vector<std::pair<std::string, std::int64_t>> text_vocabulary(
    const std::vector<AlignedSong>& songs) {
    std::map<std::string, std::int64_t> freq;
    for (const auto& song : songs) {
        for (const auto& w : song.words) ++freq[w.text];
    }
    std::vector<std::pair<std::string, std::int64_t>> vocab(freq.begin(), freq.end());
    std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return vocab;
}

namespace {

void emit_sentinels(std::ostringstream& out, const std::string& attr, int base) {
    out << attr << ' ' << base << " None\n";
    for (int i = 0; i < kSpecialKindCount; ++i) {
        out << attr << ' ' << base + 1 + i << ' '
            << special_kind_symbol(static_cast<SpecialKind>(i)) << "\n";
    }
}

}  // namespace

std::string vocab_sidecar_text(const std::vector<AlignedSong>& songs) {
    std::ostringstream out;
    out << "#songprep-vocab v1\n";

    out << "attribute bar size " << attribute_vocab_size(Attribute::Bar) << "\n";
    for (int v = 0; v <= kMaxBar; ++v) out << "bar " << v << ' ' << v << "\n";
    emit_sentinels(out, "bar", kMaxBar + 1);

    out << "attribute position size " << attribute_vocab_size(Attribute::Position) << "\n";
    {
        int idx = 0;
        for (int v : position_values()) out << "position " << idx++ << ' ' << v << "\n";
        emit_sentinels(out, "position", idx);
    }

    out << "attribute pitch size " << attribute_vocab_size(Attribute::Pitch) << "\n";
    for (int v = 0; v <= kMaxPitch; ++v) out << "pitch " << v << ' ' << v << "\n";
    emit_sentinels(out, "pitch", kMaxPitch + 1);

    out << "attribute duration size " << attribute_vocab_size(Attribute::Duration) << "\n";
    {
        int idx = 0;
        for (int v : duration_values()) out << "duration " << idx++ << ' ' << v << "\n";
        emit_sentinels(out, "duration", idx);
    }

    out << "attribute tempo size " << attribute_vocab_size(Attribute::Tempo) << "\n";
    for (int i = 0; i < 7; ++i) {
        out << "tempo " << i << ' ' << tempo_class_name(static_cast<TempoClass>(i)) << "\n";
    }
    emit_sentinels(out, "tempo", 7);

    out << "attribute word_id size " << attribute_vocab_size(Attribute::WordId) << "\n";
    out << "attribute phrase_id size " << attribute_vocab_size(Attribute::PhraseId) << "\n";
    out << "attribute token_type size " << attribute_vocab_size(Attribute::TokenType) << "\n";
    out << "token_type 0 word\n";
    out << "token_type 1 note\n";
    emit_sentinels(out, "token_type", 2);

    const auto vocab = text_vocabulary(songs);
    out << "attribute text size " << vocab.size() << "\n";
    {
        int idx = 0;
        for (const auto& [word, count] : vocab) {
            out << "text " << idx++ << ' ' << word << ' ' << count << "\n";
        }
        emit_sentinels(out, "text", idx);
    }
    return out.str();
}

}  // namespace songprep
