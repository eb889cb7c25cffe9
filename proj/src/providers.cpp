#include "phrasekit/backend.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "phrasekit/hashing.hpp"

namespace phrasekit::backend {

namespace fs = std::filesystem;

std::string to_string(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::Remote: return "remote";
        case ProviderKind::Store: return "store";
        case ProviderKind::SyntheticHash: return "synthetic-hash";
        case ProviderKind::SyntheticBlob: return "synthetic-blob";
    }
    return "unknown";
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(std::span<const std::string> texts,
                                                            bool normalize) const {
    if (texts.empty()) throw InvalidArgument("embed_batch needs at least one text");
    for (const auto& t : texts) {
        if (t.empty()) throw InvalidArgument("embed_batch got an empty text");
    }
    auto raw = embed_raw(texts);
    if (raw.size() != texts.size())
        throw InvariantViolation("provider returned " + std::to_string(raw.size()) + " vectors for " +
                                 std::to_string(texts.size()) + " texts");
    std::size_t dim = descriptor().dim;
    if (dim == 0) dim = raw.front().dim();
    for (const auto& v : raw) {
        if (v.dim() != dim) throw DimensionMismatch(dim, v.dim());
    }
    if (!normalize) return raw;
    std::vector<EmbeddingVector> out;
    out.reserve(raw.size());
    for (const auto& v : raw) out.push_back(v.normalized() ? v : l2_normalize(v));
    return out;
}

// ---------------------------------------------------------------------------

SyntheticHashProvider::SyntheticHashProvider(std::uint64_t seed, std::size_t dim, std::string model_name)
    : seed_(seed), dim_(dim), model_name_(std::move(model_name)) {
    if (dim_ == 0) throw InvalidArgument("synthetic provider needs dim > 0");
}

ProviderDescriptor SyntheticHashProvider::descriptor() const {
    return {ProviderKind::SyntheticHash, "seed=" + std::to_string(seed_), model_name_, dim_};
}

std::vector<EmbeddingVector> SyntheticHashProvider::embed_raw(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        CounterRng rng(fnv1a64(text) ^ splitmix64(seed_));
        std::vector<float> v(dim_);
        for (auto& x : v) x = static_cast<float>(rng.next_normal());
        out.push_back(l2_normalize(EmbeddingVector(std::move(v))));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<float>> orthogonal_centroids(std::size_t n, std::size_t dim) {
    if (n > dim) throw InvalidArgument("cannot place " + std::to_string(n) + " orthogonal centroids in " +
                                       std::to_string(dim) + " dimensions");
    std::vector<std::vector<float>> out(n, std::vector<float>(dim, 0.0f));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0f;
    return out;
}

SyntheticBlobProvider::SyntheticBlobProvider(std::unordered_map<std::string, ClassId> class_assignment,
                                             std::vector<std::vector<float>> centroids, double noise_sigma,
                                             std::uint64_t seed, std::string model_name)
    : assignment_(std::move(class_assignment)),
      centroids_(std::move(centroids)),
      sigma_(noise_sigma),
      seed_(seed),
      model_name_(std::move(model_name)) {
    if (!(sigma_ >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
    if (centroids_.empty()) throw InvalidArgument("blob provider needs at least one centroid");
    for (const auto& c : centroids_) {
        if (c.size() != centroids_.front().size()) throw DimensionMismatch(centroids_.front().size(), c.size());
    }
    for (const auto& [text, cls] : assignment_) {
        if (cls >= centroids_.size()) throw InvalidArgument("class without centroid for text: " + text);
    }
}

ProviderDescriptor SyntheticBlobProvider::descriptor() const {
    return {ProviderKind::SyntheticBlob, "seed=" + std::to_string(seed_), model_name_, centroids_.front().size()};
}

std::vector<EmbeddingVector> SyntheticBlobProvider::embed_raw(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        auto it = assignment_.find(text);
        if (it == assignment_.end()) throw UnknownText(text);
        const auto& centroid = centroids_[it->second];
        CounterRng rng(splitmix64(seed_) ^ fnv1a64(text));
        std::vector<float> v(centroid.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double noise = sigma_ > 0.0 ? sigma_ * rng.next_normal() : 0.0;
            v[i] = static_cast<float>(double(centroid[i]) + noise);
        }
        out.push_back(l2_normalize(EmbeddingVector(std::move(v))));
    }
    return out;
}

// ---------------------------------------------------------------------------

StoreProvider::StoreProvider(const std::string& path, std::string model_name)
    : StoreProvider(read_store(path), path, std::move(model_name)) {}

StoreProvider::StoreProvider(EmbeddingStore store, std::string path, std::string model_name)
    : store_(std::move(store)), path_(std::move(path)), model_name_(std::move(model_name)) {
    if (model_name_.empty()) model_name_ = "store:" + fs::path(path_).filename().string();
    for (std::size_t i = 0; i < store_.records.size(); ++i) {
        if (!index_.emplace(store_.records[i].text, i).second) throw DuplicateText(store_.records[i].text);
    }
}

ProviderDescriptor StoreProvider::descriptor() const {
    return {ProviderKind::Store, path_, model_name_, store_.dim};
}

std::vector<EmbeddingVector> StoreProvider::embed_raw(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        auto it = index_.find(text);
        if (it == index_.end()) throw TextNotFound(text);
        out.emplace_back(store_.records[it->second].vector);
    }
    return out;
}

// ---------------------------------------------------------------------------

CachingProvider::CachingProvider(std::shared_ptr<const EmbeddingProvider> inner, std::string cache_dir)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)) {
    if (!inner_) throw InvalidArgument("caching provider needs an inner provider");
}

std::size_t CachingProvider::misses() const {
    std::lock_guard lock(mu_);
    return misses_;
}

std::string CachingProvider::cache_path(const std::string& text) const {
    const std::string key = inner_->descriptor().model_name + '\0' + text;
    const std::string hex = to_hex(fnv1a64(key));
    return (fs::path(cache_dir_) / hex.substr(0, 2) / (hex + ".phem")).string();
}

std::vector<EmbeddingVector> CachingProvider::embed_raw(std::span<const std::string> texts) const {
    std::lock_guard lock(mu_);
    std::vector<std::string> missing;
    std::unordered_set<std::string> queued;
    for (const auto& text : texts) {
        if (memo_.count(text) || queued.count(text)) continue;
        if (!cache_dir_.empty()) {
            const auto path = cache_path(text);
            std::error_code ec;
            if (fs::exists(path, ec)) {
                try {
                    auto st = read_store(path);
                    if (st.records.size() == 1 && st.records[0].text == text) {
                        memo_.emplace(text, EmbeddingVector(std::move(st.records[0].vector)));
                        continue;
                    }
                } catch (const StoreFormatError&) {
                    // unreadable entry; recompute below
                }
            }
        }
        queued.insert(text);
        missing.push_back(text);
    }

    if (!missing.empty()) {
        auto fresh = inner_->embed_batch(missing, false);
        misses_ += missing.size();
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (!cache_dir_.empty()) {
                const fs::path path = cache_path(missing[i]);
                fs::create_directories(path.parent_path());
                EmbeddingStore one;
                one.dim = static_cast<std::uint32_t>(fresh[i].dim());
                one.records.push_back({missing[i], {fresh[i].values().begin(), fresh[i].values().end()}});
                // Write-then-rename keeps concurrent readers from seeing partial files.
                const fs::path tmp = path.string() + ".tmp";
                write_store(tmp.string(), one);
                fs::rename(tmp, path);
            }
            memo_.emplace(missing[i], fresh[i]);
        }
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(memo_.at(text));
    return out;
}

EmbeddingStore build_store(const EmbeddingProvider& provider, std::span<const std::string> texts, bool normalize) {
    EmbeddingStore store;
    store.dim = static_cast<std::uint32_t>(provider.descriptor().dim);
    if (texts.empty()) return store;
    auto vectors = provider.embed_batch(texts, normalize);
    store.dim = static_cast<std::uint32_t>(vectors.front().dim());
    std::unordered_map<std::string, bool> seen;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (seen[texts[i]]) continue;
        seen[texts[i]] = true;
        store.records.push_back({texts[i], {vectors[i].values().begin(), vectors[i].values().end()}});
    }
    return store;
}

// ---------------------------------------------------------------------------

FixtureMlmProvider::FixtureMlmProvider(const std::string& path) : model_name_("fixture-mlm") {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("bad MLM fixture " + path + ": " + e.what());
    }
    if (!j.is_object()) throw InputError("MLM fixture must be a JSON object");
    for (auto& [query, preds] : j.items()) {
        auto& list = table_[query];
        for (const auto& p : preds) {
            list.push_back({p.at("token").get<std::string>(), p.value("score", 0.0), p.value("is_subword", false)});
        }
    }
}

FixtureMlmProvider::FixtureMlmProvider(
    std::unordered_map<std::string, std::vector<prompting::MlmPrediction>> table, std::string model_name)
    : table_(std::move(table)), model_name_(std::move(model_name)) {}

std::vector<std::vector<prompting::MlmPrediction>> FixtureMlmProvider::top_k(std::span<const std::string> queries,
                                                                             std::size_t k) const {
    std::vector<std::vector<prompting::MlmPrediction>> out;
    out.reserve(queries.size());
    for (const auto& q : queries) {
        auto it = table_.find(q);
        if (it == table_.end()) {
            out.emplace_back();
            continue;
        }
        const auto n = std::min(k, it->second.size());
        out.emplace_back(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return out;
}

}  // namespace phrasekit::backend
