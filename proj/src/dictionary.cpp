#include "songprep/dictionary.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "songprep/errors.hpp"

namespace songprep {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

PronouncingDictionary PronouncingDictionary::from_stream(std::istream& in) {
    PronouncingDictionary dict;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == ';' || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head)) continue;
        // Alternate pronunciations "WORD(1)" are skipped; the first entry is
        // the canonical one.
        if (head.find('(') != std::string::npos) continue;
        std::vector<std::string> phones;
        std::string ph;
        while (fields >> ph) phones.push_back(ph);
        if (phones.empty()) continue;
        dict.entries_.emplace(lower(head), std::move(phones));
    }
    return dict;
}

PronouncingDictionary PronouncingDictionary::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pronouncing dictionary '" + path + "'");
    return from_stream(in);
}

PronouncingDictionary PronouncingDictionary::from_text(const std::string& text) {
    std::istringstream in(text);
    return from_stream(in);
}

bool PronouncingDictionary::contains(const std::string& word) const {
    return entries_.count(lower(word)) > 0;
}

const std::vector<std::string>& PronouncingDictionary::phonemes(const std::string& word) const {
    auto it = entries_.find(lower(word));
    if (it == entries_.end()) {
        throw LookupError("word '" + word + "' not in the pronouncing dictionary");
    }
    return it->second;
}

std::vector<int> PronouncingDictionary::stress(const std::string& word) const {
    std::vector<int> levels;
    for (const std::string& ph : phonemes(word)) {
        const char last = ph.empty() ? '\0' : ph.back();
        if (last >= '0' && last <= '2') {
            levels.push_back(last - '0');
        }
    }
    return levels;
}

}  // namespace songprep
