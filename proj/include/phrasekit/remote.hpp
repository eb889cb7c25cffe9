#pragma once

#include <atomic>
#include <chrono>
#include <string>

#include <json.hpp>

#include "phrasekit/backend.hpp"

namespace phrasekit::backend {

struct RemoteOptions {
    // e.g. "http://127.0.0.1:8765"
    std::string endpoint;
    // Name used in reports and cache keys; defaults to "remote@<endpoint>".
    std::string model_name;
    std::size_t max_batch = 32;
    std::size_t max_in_flight = 4;
    int max_attempts = 3;
    std::chrono::duration<double> backoff_base{0.5};
    double backoff_factor = 2.0;
    std::chrono::seconds timeout{60};
};

// JSON-over-HTTP client for the model service. Retries transport errors and
// 5xx responses with exponential backoff; 4xx responses fail immediately.
class SidecarClient {
public:
    explicit SidecarClient(RemoteOptions options);

    nlohmann::json post(const std::string& path, const nlohmann::json& body) const;
    nlohmann::json get(const std::string& path) const;

    const RemoteOptions& options() const noexcept { return options_; }
    // Total HTTP requests issued, including retries.
    std::size_t requests() const noexcept { return requests_.load(); }

private:
    nlohmann::json request(const std::string& method, const std::string& path, const std::string& body) const;

    RemoteOptions options_;
    mutable std::atomic<std::size_t> requests_{0};
};

struct SidecarHealth {
    std::string status;
    std::string text_encoder;
    std::string mlm;
    std::size_t max_batch = 0;
};

// GET /v1/health. A service still loading answers 503, which surfaces as
// ProviderUnavailable once the retries run out.
SidecarHealth check_health(const SidecarClient& client);

// POST /v1/embed
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(RemoteOptions options);

    ProviderDescriptor descriptor() const override;
    const SidecarClient& client() const noexcept { return client_; }

protected:
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) const override;

private:
    SidecarClient client_;
    mutable std::atomic<std::size_t> dim_{0};
};

// POST /v1/mlm/topk
class RemoteMlmProvider final : public MlmProvider {
public:
    explicit RemoteMlmProvider(RemoteOptions options);

    std::string model_name() const override;
    std::vector<std::vector<prompting::MlmPrediction>> top_k(std::span<const std::string> queries,
                                                             std::size_t k) const override;
    const SidecarClient& client() const noexcept { return client_; }

private:
    SidecarClient client_;
};

}  // namespace phrasekit::backend
