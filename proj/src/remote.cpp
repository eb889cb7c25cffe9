#include "phrasekit/remote.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include <httplib.h>

namespace phrasekit::backend {

namespace {

// Runs fn(0..n-1) on at most `workers` threads. The exception of the lowest
// failing index is rethrown after all workers finish.
void run_bounded(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

SidecarClient::SidecarClient(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw InvalidArgument("remote provider needs an endpoint");
    if (options_.max_batch == 0) throw InvalidArgument("max_batch must be >= 1");
    if (options_.max_attempts < 1) throw InvalidArgument("max_attempts must be >= 1");
    if (options_.model_name.empty()) options_.model_name = "remote@" + options_.endpoint;
}

nlohmann::json SidecarClient::post(const std::string& path, const nlohmann::json& body) const {
    return request("POST", path, body.dump());
}

nlohmann::json SidecarClient::get(const std::string& path) const { return request("GET", path, {}); }

nlohmann::json SidecarClient::request(const std::string& method, const std::string& path,
                                      const std::string& body) const {
    std::string last_error;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
        if (attempt > 0) {
            const auto delay = options_.backoff_base * std::pow(options_.backoff_factor, attempt - 1);
            std::this_thread::sleep_for(delay);
        }
        httplib::Client cli(options_.endpoint);
        cli.set_connection_timeout(options_.timeout);
        cli.set_read_timeout(options_.timeout);
        cli.set_write_timeout(options_.timeout);
        ++requests_;
        auto res = method == "POST" ? cli.Post(path, body, "application/json") : cli.Get(path);
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        if (res->status != 200)
            throw ProviderError(method + " " + path + " failed with HTTP " + std::to_string(res->status) + ": " +
                                res->body);
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError("malformed JSON from " + path + ": " + e.what());
        }
    }
    throw ProviderUnavailable(options_.endpoint + path + " unavailable after " +
                              std::to_string(options_.max_attempts) + " attempts (" + last_error + ")");
}

SidecarHealth check_health(const SidecarClient& client) {
    const auto res = client.get("/v1/health");
    try {
        SidecarHealth h;
        h.status = res.at("status").get<std::string>();
        h.text_encoder = res.at("models").value("text_encoder", "");
        h.mlm = res.at("models").value("mlm", "");
        h.max_batch = res.value("max_batch", std::size_t{0});
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed health response: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteOptions options) : client_(std::move(options)) {}

ProviderDescriptor RemoteEmbeddingProvider::descriptor() const {
    return {ProviderKind::Remote, client_.options().endpoint, client_.options().model_name, dim_.load()};
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_raw(std::span<const std::string> texts) const {
    const std::size_t batch = client_.options().max_batch;
    const std::size_t n_batches = (texts.size() + batch - 1) / batch;
    std::vector<std::vector<EmbeddingVector>> parts(n_batches);

    run_bounded(n_batches, client_.options().max_in_flight, [&](std::size_t b) {
        const auto first = texts.begin() + static_cast<std::ptrdiff_t>(b * batch);
        const auto last = texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), (b + 1) * batch));
        nlohmann::json body;
        body["texts"] = std::vector<std::string>(first, last);
        body["normalize"] = false;
        const auto res = client_.post("/v1/embed", body);
        try {
            const auto& vectors = res.at("vectors");
            if (vectors.size() != static_cast<std::size_t>(last - first))
                throw ProviderError("embed response has " + std::to_string(vectors.size()) + " vectors for " +
                                    std::to_string(last - first) + " texts");
            const auto dim = res.at("dim").get<std::size_t>();
            std::size_t expected = 0;
            if (!dim_.compare_exchange_strong(expected, dim) && expected != dim)
                throw DimensionMismatch(expected, dim);
            for (const auto& v : vectors) {
                auto values = v.get<std::vector<float>>();
                if (values.size() != dim) throw DimensionMismatch(dim, values.size());
                parts[b].emplace_back(std::move(values));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed embed response: ") + e.what());
        } catch (const InvalidArgument& e) {
            throw ProviderError(std::string("bad vector in embed response: ") + e.what());
        }
    });

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (auto& p : parts) {
        for (auto& v : p) out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------------------

RemoteMlmProvider::RemoteMlmProvider(RemoteOptions options) : client_(std::move(options)) {}

std::string RemoteMlmProvider::model_name() const { return client_.options().model_name; }

std::vector<std::vector<prompting::MlmPrediction>> RemoteMlmProvider::top_k(std::span<const std::string> queries,
                                                                            std::size_t k) const {
    if (k == 0 || k > 100) throw InvalidArgument("MLM top-k must be in [1, 100]");
    const std::size_t batch = client_.options().max_batch;
    const std::size_t n_batches = (queries.size() + batch - 1) / batch;
    std::vector<std::vector<std::vector<prompting::MlmPrediction>>> parts(n_batches);

    run_bounded(n_batches, client_.options().max_in_flight, [&](std::size_t b) {
        const auto first = queries.begin() + static_cast<std::ptrdiff_t>(b * batch);
        const auto last = queries.begin() + static_cast<std::ptrdiff_t>(std::min(queries.size(), (b + 1) * batch));
        nlohmann::json body;
        body["texts"] = std::vector<std::string>(first, last);
        body["k"] = k;
        const auto res = client_.post("/v1/mlm/topk", body);
        try {
            const auto& preds = res.at("predictions");
            if (preds.size() != static_cast<std::size_t>(last - first))
                throw ProviderError("topk response has " + std::to_string(preds.size()) + " lists for " +
                                    std::to_string(last - first) + " queries");
            for (const auto& list : preds) {
                auto& out = parts[b].emplace_back();
                for (const auto& p : list) {
                    out.push_back({p.at("token").get<std::string>(), p.at("score").get<double>(),
                                   p.value("is_subword", false)});
                }
                for (std::size_t i = 1; i < out.size(); ++i) {
                    if (out[i].score > out[i - 1].score)
                        throw ProviderError("topk scores are not non-increasing");
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed topk response: ") + e.what());
        }
    });

    std::vector<std::vector<prompting::MlmPrediction>> out;
    out.reserve(queries.size());
    for (auto& p : parts) {
        for (auto& l : p) out.push_back(std::move(l));
    }
    return out;
}

}  // namespace phrasekit::backend
