#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "phrasekit/core.hpp"
#include "phrasekit/prompting.hpp"
#include "phrasekit/store.hpp"

namespace phrasekit::backend {

enum class ProviderKind { Remote, Store, SyntheticHash, SyntheticBlob };

std::string to_string(ProviderKind kind);

struct ProviderDescriptor {
    ProviderKind kind;
    std::string endpoint_or_path;
    std::string model_name;
    std::size_t dim = 0;
};

// Text -> vector mapping. Implementations must be safe to call from several
// threads at once.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual ProviderDescriptor descriptor() const = 0;

    // One vector per text, in input order. Checks preconditions, the
    // provider's dimension and (optionally) normalizes.
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts, bool normalize) const;

protected:
    virtual std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) const = 0;
};

// Standard-normal vector seeded by the text bytes, then normalized.
class SyntheticHashProvider final : public EmbeddingProvider {
public:
    SyntheticHashProvider(std::uint64_t seed, std::size_t dim, std::string model_name = "synthetic-hash");

    ProviderDescriptor descriptor() const override;

protected:
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) const override;

private:
    std::uint64_t seed_;
    std::size_t dim_;
    std::string model_name_;
};

// Gaussian blobs: normalize(centroid[class(text)] + N(0, sigma^2 I)).
class SyntheticBlobProvider final : public EmbeddingProvider {
public:
    SyntheticBlobProvider(std::unordered_map<std::string, ClassId> class_assignment,
                          std::vector<std::vector<float>> centroids, double noise_sigma, std::uint64_t seed,
                          std::string model_name = "synthetic-blob");

    ProviderDescriptor descriptor() const override;

protected:
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) const override;

private:
    std::unordered_map<std::string, ClassId> assignment_;
    std::vector<std::vector<float>> centroids_;
    double sigma_;
    std::uint64_t seed_;
    std::string model_name_;
};

// `n` mutually orthogonal unit vectors (standard basis) in `dim` dimensions.
std::vector<std::vector<float>> orthogonal_centroids(std::size_t n, std::size_t dim);

// Serves vectors from a loaded store; misses raise TextNotFound.
class StoreProvider final : public EmbeddingProvider {
public:
    explicit StoreProvider(const std::string& path, std::string model_name = {});
    StoreProvider(EmbeddingStore store, std::string path, std::string model_name);

    ProviderDescriptor descriptor() const override;
    bool contains(const std::string& text) const { return index_.count(text) != 0; }

protected:
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) const override;

private:
    EmbeddingStore store_;
    std::string path_;
    std::string model_name_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Wraps another provider with an in-memory map plus an on-disk directory of
// one-record store files named by a hash of (model_name, text). Every
// distinct text reaches the inner provider at most once per instance.
class CachingProvider final : public EmbeddingProvider {
public:
    CachingProvider(std::shared_ptr<const EmbeddingProvider> inner, std::string cache_dir);

    ProviderDescriptor descriptor() const override { return inner_->descriptor(); }
    std::size_t misses() const;

    std::string cache_path(const std::string& text) const;

protected:
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) const override;

private:
    std::shared_ptr<const EmbeddingProvider> inner_;
    std::string cache_dir_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, EmbeddingVector> memo_;
    mutable std::size_t misses_ = 0;
};

// Embeds `texts` and collects them into a store.
EmbeddingStore build_store(const EmbeddingProvider& provider, std::span<const std::string> texts,
                           bool normalize);

// Fill-mask service abstraction.
class MlmProvider {
public:
    virtual ~MlmProvider() = default;
    virtual std::string model_name() const = 0;
    // One prediction list per query, scores non-increasing.
    virtual std::vector<std::vector<prompting::MlmPrediction>> top_k(std::span<const std::string> queries,
                                                                     std::size_t k) const = 0;
};

// Replays predictions from a JSON object {query: [{token, score, is_subword}]}.
// Queries absent from the fixture get an empty prediction list.
class FixtureMlmProvider final : public MlmProvider {
public:
    explicit FixtureMlmProvider(const std::string& path);
    explicit FixtureMlmProvider(std::unordered_map<std::string, std::vector<prompting::MlmPrediction>> table,
                                std::string model_name = "fixture-mlm");

    std::string model_name() const override { return model_name_; }
    std::vector<std::vector<prompting::MlmPrediction>> top_k(std::span<const std::string> queries,
                                                             std::size_t k) const override;

private:
    std::unordered_map<std::string, std::vector<prompting::MlmPrediction>> table_;
    std::string model_name_;
};

}  // namespace phrasekit::backend
