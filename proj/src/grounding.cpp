#include "phrasekit/grounding.hpp"

#include <istream>
#include <ostream>

#include "phrasekit/core.hpp"

namespace phrasekit::grounding {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (is_ascii_letter(c)) {
            cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

void WordCounts::add_caption(std::string_view caption) {
    for (auto& w : tokenize(caption)) ++counts_[std::move(w)];
}

void WordCounts::merge(const WordCounts& other) {
    for (const auto& [w, n] : other.counts_) counts_[w] += n;
}

std::size_t WordCounts::count(const std::string& word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
}

GroundedVocab build_grounded_vocab(const WordCounts& counts, std::size_t threshold, std::string corpus_id) {
    GroundedVocab v{{}, threshold, std::move(corpus_id)};
    for (const auto& [w, n] : counts.counts()) {
        if (n > threshold) v.words.insert(w);
    }
    return v;
}

GroundedVocab build_grounded_vocab(std::istream& captions, std::size_t threshold, std::string corpus_id) {
    WordCounts counts;
    std::string line;
    while (std::getline(captions, line)) counts.add_caption(line);
    return build_grounded_vocab(counts, threshold, std::move(corpus_id));
}

GroundedVocab build_grounded_vocab(const std::vector<std::string>& captions, std::size_t threshold,
                                   std::string corpus_id) {
    WordCounts counts;
    for (const auto& c : captions) counts.add_caption(c);
    return build_grounded_vocab(counts, threshold, std::move(corpus_id));
}

void write_vocab(std::ostream& out, const GroundedVocab& vocab) {
    for (const auto& w : vocab.words) out << w << '\n';
}

GroundedVocab read_vocab(std::istream& in, std::string corpus_id) {
    GroundedVocab v;
    v.corpus_id = std::move(corpus_id);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) v.words.insert(ascii_lower(line));
    }
    return v;
}

double grounding_ratio(const std::vector<std::string>& texts, const GroundedVocab& vocab, RatioMode mode) {
    std::size_t grounded = 0;
    std::size_t total = 0;
    for (const auto& t : texts) {
        const auto tokens = tokenize(t);
        if (mode == RatioMode::Token) {
            total += tokens.size();
            for (const auto& w : tokens) grounded += vocab.contains(w);
        } else if (!tokens.empty()) {
            ++total;
            for (const auto& w : tokens) {
                if (vocab.contains(w)) {
                    ++grounded;
                    break;
                }
            }
        }
    }
    return total == 0 ? 0.0 : double(grounded) / double(total);
}

}  // namespace phrasekit::grounding
