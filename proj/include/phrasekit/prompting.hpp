#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phrasekit/core.hpp"

namespace phrasekit::prompting {

// Placeholder the model service swaps for its own mask token.
inline constexpr std::string_view kMaskPlaceholder = "[mask]";

struct MlmPrediction {
    std::string token;
    double score = 0.0;
    // Set by the provider for word-piece continuations ("##ism").
    bool is_subword = false;
};

// "{surface} is a [mask]"
std::string build_mlm_query(const Phrase& phrase);

// Greedy scan over the predictions in rank order. The result for K is
// always a prefix of the result for any larger K.
KeywordSet select_keywords(const Phrase& phrase, const std::vector<MlmPrediction>& predictions,
                           const PromptConfig& config);

// "A photo of {surface}" or "A photo of {surface}. A {d1}, ..., {dK}".
std::string build_prompt(const Phrase& phrase, const KeywordSet& keywords);

// Same as build_prompt with the keyword list cut to the first `k` entries.
std::string build_prompt(const Phrase& phrase, const KeywordSet& keywords, std::size_t k);

// Keyword cache: one line per phrase, `surface<TAB>k1,k2,...`.
using KeywordCache = std::map<std::string, KeywordSet>;

KeywordCache read_keyword_cache(std::istream& in);
KeywordCache read_keyword_cache_file(const std::string& path);
void write_keyword_cache(std::ostream& out, const KeywordCache& cache);
void write_keyword_cache_file(const std::string& path, const KeywordCache& cache);

}  // namespace phrasekit::prompting
