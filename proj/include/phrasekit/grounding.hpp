#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace phrasekit::grounding {

// Lowercase, split on anything that is not an ASCII letter.
std::vector<std::string> tokenize(std::string_view text);

// Word counts over a caption stream. Shards may be counted separately and
// merged; merging is exact.
class WordCounts {
public:
    void add_caption(std::string_view caption);
    void merge(const WordCounts& other);
    std::size_t count(const std::string& word) const;
    const std::map<std::string, std::size_t>& counts() const noexcept { return counts_; }

private:
    std::map<std::string, std::size_t> counts_;
};

struct GroundedVocab {
    std::set<std::string> words;
    std::size_t threshold = 100;
    std::string corpus_id;

    bool contains(const std::string& w) const { return words.count(w) != 0; }
};

// Keeps words seen strictly more than `threshold` times.
GroundedVocab build_grounded_vocab(const WordCounts& counts, std::size_t threshold = 100, std::string corpus_id = {});
GroundedVocab build_grounded_vocab(std::istream& captions, std::size_t threshold = 100, std::string corpus_id = {});
GroundedVocab build_grounded_vocab(const std::vector<std::string>& captions, std::size_t threshold = 100,
                                   std::string corpus_id = {});

// Sorted words, one per line.
void write_vocab(std::ostream& out, const GroundedVocab& vocab);
GroundedVocab read_vocab(std::istream& in, std::string corpus_id = {});

enum class RatioMode {
    // grounded tokens / all tokens
    Token,
    // texts with at least one grounded token / texts with any token
    Phrase,
};

double grounding_ratio(const std::vector<std::string>& texts, const GroundedVocab& vocab,
                       RatioMode mode = RatioMode::Token);

}  // namespace phrasekit::grounding
