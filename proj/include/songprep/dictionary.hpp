#pragma once

#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

namespace songprep {

// CMU pronouncing dictionary, text format: "WORD  PH1 PH2 ..." with stress
// digits 0/1/2 appended to vowel phonemes. Alternate pronunciations appear
// as "WORD(1)", "WORD(2)", ... and are ignored: the first listed entry wins.
class PronouncingDictionary {
public:
    PronouncingDictionary() = default;

    static PronouncingDictionary from_stream(std::istream& in);
    static PronouncingDictionary from_file(const std::string& path);
    static PronouncingDictionary from_text(const std::string& text);

    bool contains(const std::string& word) const;

    // Phonemes of the first pronunciation, stress digits included.
    const std::vector<std::string>& phonemes(const std::string& word) const;

    // Stress levels of the word's vowel phonemes in order: 0 unstressed,
    // 1 primary, 2 secondary. Throws LookupError on out-of-dictionary words.
    std::vector<int> stress(const std::string& word) const;

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::vector<std::string>> entries_;
};

}  // namespace songprep
