#include "phrasekit/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <set>

namespace phrasekit {

namespace {
constexpr double kZeroNorm = 1e-12;

bool is_blank(std::string_view s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}
}  // namespace

UnresolvedSeed::UnresolvedSeed(std::vector<std::string> missing)
    : InputError([&] {
          std::string msg = "unresolved seed entities:";
          for (const auto& m : missing) msg += " '" + m + "'";
          return msg;
      }()),
      missing_(std::move(missing)) {}

Phrase::Phrase(std::string surface, std::optional<ClassId> label, std::string dataset_id)
    : surface_(std::move(surface)), label_(label), dataset_id_(std::move(dataset_id)) {
    if (is_blank(surface_)) throw InvalidArgument("phrase surface is empty");
    if (surface_.find_first_of("\r\n") != std::string::npos)
        throw InvalidArgument("phrase surface contains a line break: " + surface_);
}

EmbeddingVector::EmbeddingVector(std::vector<float> values, bool normalized)
    : values_(std::move(values)), normalized_(normalized) {
    if (values_.empty()) throw InvalidArgument("embedding vector has zero dimension");
    for (float x : values_) {
        if (!std::isfinite(x)) throw InvalidArgument("embedding vector has a non-finite value");
    }
    if (normalized_) {
        const double n = l2_norm(values_);
        if (std::abs(n - 1.0) > kUnitTolerance)
            throw InvariantViolation("vector flagged normalized has norm " + std::to_string(n));
    }
}

void KeywordSet::validate() const {
    std::set<std::string> phrase_tokens;
    for (auto& t : split_whitespace(phrase_surface)) phrase_tokens.insert(ascii_lower(t));
    std::set<std::string> seen;
    for (const auto& k : keywords) {
        if (k.size() < 2) throw InvariantViolation("keyword shorter than 2 letters: " + k);
        for (char c : k) {
            if (!is_ascii_letter(c)) throw InvariantViolation("keyword is not a word: " + k);
        }
        if (ascii_lower(k) != k) throw InvariantViolation("keyword not lowercase: " + k);
        if (phrase_tokens.count(k)) throw InvariantViolation("keyword repeats the phrase: " + k);
        if (!seen.insert(k).second) throw InvariantViolation("duplicate keyword: " + k);
    }
}

void PromptConfig::validate() const {
    if (mlm_fetch_k == 0) throw InvalidArgument("mlm_fetch_k must be positive");
    if (num_keywords > mlm_fetch_k)
        throw InvalidArgument("number of keywords exceeds mlm_fetch_k");
}

double dot(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += double(a[i]) * double(b[i]);
    return s;
}

double l2_norm(std::span<const float> v) {
    double s = 0.0;
    for (float x : v) s += double(x) * double(x);
    return std::sqrt(s);
}

EmbeddingVector l2_normalize(const EmbeddingVector& v) {
    const double n = l2_norm(v.values());
    if (n < kZeroNorm) throw ZeroVector();
    std::vector<float> out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) out[i] = static_cast<float>(double(v[i]) / n);
    return EmbeddingVector(std::move(out), true);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
    const double na = l2_norm(a.values());
    const double nb = l2_norm(b.values());
    if (na < kZeroNorm || nb < kZeroNorm) throw ZeroVector();
    // na * nb is commutative, so the result is exactly symmetric.
    const double c = dot(a.values(), b.values()) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

bool is_ascii_letter(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

void warn(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

}  // namespace phrasekit
