#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phrasekit/errors.hpp"

namespace phrasekit {

using ClassId = std::size_t;

// An entity surface form. Construction enforces the surface invariants:
// non-empty after trimming, no line breaks.
class Phrase {
public:
    Phrase(std::string surface, std::optional<ClassId> label = std::nullopt,
           std::string dataset_id = {});

    const std::string& surface() const noexcept { return surface_; }
    const std::optional<ClassId>& label() const noexcept { return label_; }
    const std::string& dataset_id() const noexcept { return dataset_id_; }

    bool operator==(const Phrase&) const = default;

private:
    std::string surface_;
    std::optional<ClassId> label_;
    std::string dataset_id_;
};

// Fixed-dimension float vector. Values must be finite; a vector flagged as
// normalized must have unit L2 norm within 1e-4.
class EmbeddingVector {
public:
    static constexpr double kUnitTolerance = 1e-4;

    explicit EmbeddingVector(std::vector<float> values, bool normalized = false);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const float> values() const noexcept { return values_; }
    bool normalized() const noexcept { return normalized_; }
    float operator[](std::size_t i) const { return values_[i]; }

    bool operator==(const EmbeddingVector&) const = default;

private:
    std::vector<float> values_;
    bool normalized_;
};

struct KeywordSet {
    std::string phrase_surface;
    std::vector<std::string> keywords;

    // Checks distinctness, the whole-word filter and phrase overlap; throws
    // InvariantViolation on failure.
    void validate() const;

    bool operator==(const KeywordSet&) const = default;
};

enum class TemplateId { PhotoOf };

struct PromptConfig {
    std::size_t num_keywords = 3;
    std::size_t mlm_fetch_k = 20;
    TemplateId template_id = TemplateId::PhotoOf;
    // When false only lowercasing and deduplication are applied to MLM output.
    bool filter = true;

    void validate() const;
};

// Reductions accumulate in double.
double dot(std::span<const float> a, std::span<const float> b);
double l2_norm(std::span<const float> v);

EmbeddingVector l2_normalize(const EmbeddingVector& v);
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// ASCII helpers shared by the prompting and grounding tokenizers.
bool is_ascii_letter(char c) noexcept;
std::string ascii_lower(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);

// Writes "warning: <msg>" to stderr.
void warn(std::string_view msg);

}  // namespace phrasekit
