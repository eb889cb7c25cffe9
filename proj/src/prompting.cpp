#include "phrasekit/prompting.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace phrasekit::prompting {

namespace {

bool is_word(const std::string& token) {
    if (token.size() < 2) return false;
    for (char c : token) {
        if (!is_ascii_letter(c)) return false;
    }
    return true;
}

}  // namespace

std::string build_mlm_query(const Phrase& phrase) {
    std::string q = phrase.surface();
    q += " is a ";
    q += kMaskPlaceholder;
    return q;
}

KeywordSet select_keywords(const Phrase& phrase, const std::vector<MlmPrediction>& predictions,
                           const PromptConfig& config) {
    config.validate();
    KeywordSet out{phrase.surface(), {}};
    std::set<std::string> phrase_tokens;
    for (const auto& t : split_whitespace(phrase.surface())) phrase_tokens.insert(ascii_lower(t));
    std::set<std::string> kept;

    for (const auto& pred : predictions) {
        if (out.keywords.size() >= config.num_keywords) break;
        const std::string folded = ascii_lower(pred.token);
        if (config.filter) {
            if (!is_word(pred.token) || pred.is_subword) continue;
            if (phrase_tokens.count(folded)) continue;
        } else if (folded.empty() || folded.find_first_of(", \t\r\n") != std::string::npos) {
            // Unrepresentable in the cache file format.
            continue;
        }
        if (!kept.insert(folded).second) continue;
        out.keywords.push_back(folded);
    }
    return out;
}

std::string build_prompt(const Phrase& phrase, const KeywordSet& keywords) {
    return build_prompt(phrase, keywords, keywords.keywords.size());
}

std::string build_prompt(const Phrase& phrase, const KeywordSet& keywords, std::size_t k) {
    if (keywords.phrase_surface != phrase.surface())
        throw InvalidArgument("keyword set belongs to '" + keywords.phrase_surface + "', not '" +
                              phrase.surface() + "'");
    std::string prompt = "A photo of " + phrase.surface();
    const std::size_t n = std::min(k, keywords.keywords.size());
    if (n == 0) return prompt;
    prompt += ". A ";
    for (std::size_t i = 0; i < n; ++i) {
        if (i) prompt += ", ";
        prompt += keywords.keywords[i];
    }
    return prompt;
}

KeywordCache read_keyword_cache(std::istream& in) {
    KeywordCache cache;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw MalformedLine(lineno, "expected surface<TAB>keywords");
        KeywordSet ks{line.substr(0, tab), {}};
        const std::string list = line.substr(tab + 1);
        std::size_t start = 0;
        while (start < list.size()) {
            auto comma = list.find(',', start);
            if (comma == std::string::npos) comma = list.size();
            if (comma == start) throw MalformedLine(lineno, "empty keyword");
            ks.keywords.push_back(list.substr(start, comma - start));
            start = comma + 1;
        }
        if (!cache.emplace(ks.phrase_surface, ks).second)
            throw MalformedLine(lineno, "duplicate surface " + ks.phrase_surface);
    }
    return cache;
}

KeywordCache read_keyword_cache_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path);
    return read_keyword_cache(in);
}

void write_keyword_cache(std::ostream& out, const KeywordCache& cache) {
    for (const auto& [surface, ks] : cache) {
        if (surface.find('\t') != std::string::npos)
            throw InvalidArgument("surface contains a tab: " + surface);
        out << surface << '\t';
        for (std::size_t i = 0; i < ks.keywords.size(); ++i) {
            if (i) out << ',';
            out << ks.keywords[i];
        }
        out << '\n';
    }
}

void write_keyword_cache_file(const std::string& path, const KeywordCache& cache) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileNotFound(path);
    write_keyword_cache(out, cache);
}

}  // namespace phrasekit::prompting
