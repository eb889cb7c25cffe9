#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

#include "phrasekit/backend.hpp"
#include "phrasekit/cli.hpp"
#include "phrasekit/cluster_eval.hpp"
#include "phrasekit/expansion.hpp"
#include "phrasekit/grounding.hpp"
#include "phrasekit/hashing.hpp"
#include "phrasekit/ingest.hpp"
#include "phrasekit/prompting.hpp"
#include "phrasekit/remote.hpp"

namespace phrasekit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const RunConfig& c) {
    j = json{{"dataset_id", c.dataset_id},
             {"corpus", c.corpus},
             {"bio", c.bio},
             {"tag_column", c.tag_column},
             {"exclude", c.exclude},
             {"strict", c.strict},
             {"mention_level", c.mention_level},
             {"provider", c.provider},
             {"endpoint", c.endpoint},
             {"store", c.store},
             {"model_name", c.model_name},
             {"dim", c.dim},
             {"synthetic_seed", c.synthetic_seed},
             {"sigma", c.sigma},
             {"max_batch", c.max_batch},
             {"max_in_flight", c.max_in_flight},
             {"cache_dir", c.cache_dir},
             {"mlm_provider", c.mlm_provider},
             {"mlm_endpoint", c.mlm_endpoint},
             {"mlm_fixture", c.mlm_fixture},
             {"mlm_model_name", c.mlm_model_name},
             {"keywords", c.keywords},
             {"k", c.k},
             {"mlm_fetch_k", c.mlm_fetch_k},
             {"keyword_filter", c.keyword_filter},
             {"prompt", c.prompt},
             {"k_values", c.k_values},
             {"normalize", c.normalize},
             {"seed", c.seed},
             {"restarts", c.restarts},
             {"max_iter", c.max_iter},
             {"tol", c.tol},
             {"vocab", c.vocab},
             {"seeds", c.seeds},
             {"top_n", c.top_n},
             {"map_k", c.map_k},
             {"captions", c.captions},
             {"grounded_vocab", c.grounded_vocab},
             {"vocab_out", c.vocab_out},
             {"threshold", c.threshold},
             {"phrase_level", c.phrase_level},
             {"output", c.output},
             {"store_out", c.store_out},
             {"input", c.input}};
}

void from_json(const json& j, RunConfig& c) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    json defaults;
    to_json(defaults, c);
    for (const auto& [key, value] : j.items()) {
        if (!defaults.contains(key)) throw InputError("unknown config key: " + key);
    }
    const auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    try {
        get("dataset_id", c.dataset_id);
        get("corpus", c.corpus);
        get("bio", c.bio);
        get("tag_column", c.tag_column);
        get("exclude", c.exclude);
        get("strict", c.strict);
        get("mention_level", c.mention_level);
        get("provider", c.provider);
        get("endpoint", c.endpoint);
        get("store", c.store);
        get("model_name", c.model_name);
        get("dim", c.dim);
        get("synthetic_seed", c.synthetic_seed);
        get("sigma", c.sigma);
        get("max_batch", c.max_batch);
        get("max_in_flight", c.max_in_flight);
        get("cache_dir", c.cache_dir);
        get("mlm_provider", c.mlm_provider);
        get("mlm_endpoint", c.mlm_endpoint);
        get("mlm_fixture", c.mlm_fixture);
        get("mlm_model_name", c.mlm_model_name);
        get("keywords", c.keywords);
        get("k", c.k);
        get("mlm_fetch_k", c.mlm_fetch_k);
        get("keyword_filter", c.keyword_filter);
        get("prompt", c.prompt);
        get("k_values", c.k_values);
        get("normalize", c.normalize);
        get("seed", c.seed);
        get("restarts", c.restarts);
        get("max_iter", c.max_iter);
        get("tol", c.tol);
        get("vocab", c.vocab);
        get("seeds", c.seeds);
        get("top_n", c.top_n);
        get("map_k", c.map_k);
        get("captions", c.captions);
        get("grounded_vocab", c.grounded_vocab);
        get("vocab_out", c.vocab_out);
        get("threshold", c.threshold);
        get("phrase_level", c.phrase_level);
        get("output", c.output);
        get("store_out", c.store_out);
        get("input", c.input);
    } catch (const json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
}

std::string config_hash(const RunConfig& config) {
    json j = config;
    for (const char* key : {"output", "store_out", "input", "vocab_out"}) j.erase(key);
    return to_hex(fnv1a64(j.dump()));
}

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw InputError("missing required input: " + what);
    if (!fs::exists(path)) throw FileNotFound(path);
}

void emit(const RunConfig& config, std::vector<json>& records, json record) {
    record["config_hash"] = config_hash(config);
    record["timestamp"] = utc_timestamp();
    if (!config.output.empty()) {
        std::ofstream out(config.output, std::ios::app | std::ios::binary);
        if (!out) throw FileNotFound(config.output);
        out << record.dump() << '\n';
    }
    records.push_back(std::move(record));
}

ingest::LabeledCorpus load_corpus(const RunConfig& config) {
    if (!config.corpus.empty()) {
        require_file(config.corpus, "corpus");
        auto corpus = ingest::read_entity_list_file(config.corpus, config.dataset_id);
        if (corpus.mention_level && !config.mention_level)
            throw InputError("entity list has repeated surfaces; pass --mention-level to keep them");
        return corpus;
    }
    require_file(config.bio, "--corpus or --bio");
    ingest::BioOptions opt;
    opt.tag_column = config.tag_column;
    opt.excluded_classes = {config.exclude.begin(), config.exclude.end()};
    opt.strict = config.strict;
    auto parsed = ingest::parse_bio_file(config.bio, opt);
    for (const auto& d : parsed.diagnostics) warn(config.bio + ": " + d);
    if (config.mention_level) return ingest::mention_corpus(parsed.spans, config.dataset_id);
    auto dedup = ingest::dedup_entities(parsed.spans, config.dataset_id);
    if (!dedup.dropped.empty())
        warn(std::to_string(dedup.dropped.size()) + " surfaces dropped on label ties");
    return std::move(dedup.corpus);
}

std::unique_ptr<backend::MlmProvider> make_mlm(const RunConfig& config) {
    if (config.mlm_provider.empty()) return nullptr;
    if (config.mlm_provider == "fixture") {
        require_file(config.mlm_fixture, "--mlm-fixture");
        return std::make_unique<backend::FixtureMlmProvider>(config.mlm_fixture);
    }
    if (config.mlm_provider == "remote") {
        backend::RemoteOptions opt;
        opt.endpoint = config.mlm_endpoint.empty() ? config.endpoint : config.mlm_endpoint;
        opt.model_name = config.mlm_model_name;
        opt.max_batch = config.max_batch;
        opt.max_in_flight = config.max_in_flight;
        return std::make_unique<backend::RemoteMlmProvider>(std::move(opt));
    }
    throw InputError("unknown MLM provider: " + config.mlm_provider);
}

std::string mlm_name(const RunConfig& config) {
    if (config.mlm_provider.empty()) return "";
    if (config.mlm_provider == "fixture") return "fixture-mlm";
    return config.mlm_model_name.empty() ? "remote@" + (config.mlm_endpoint.empty() ? config.endpoint : config.mlm_endpoint)
                                         : config.mlm_model_name;
}

PromptConfig prompt_config(const RunConfig& config, std::size_t k) {
    PromptConfig pc;
    pc.num_keywords = k;
    pc.mlm_fetch_k = config.mlm_fetch_k;
    pc.filter = config.keyword_filter;
    pc.validate();
    return pc;
}

struct KeywordStats {
    std::size_t probed = 0;
    std::size_t cached = 0;
    std::size_t empty = 0;
};

// Loads the keyword cache and probes the MLM for any surface it lacks. The
// cache keeps every filtered keyword up to mlm_fetch_k; prompts use a prefix.
prompting::KeywordCache resolve_keywords(const RunConfig& config, const std::vector<Phrase>& phrases,
                                         KeywordStats* stats = nullptr) {
    prompting::KeywordCache cache;
    if (!config.keywords.empty() && fs::exists(config.keywords))
        cache = prompting::read_keyword_cache_file(config.keywords);

    std::vector<const Phrase*> todo;
    std::set<std::string> queued;
    for (const auto& p : phrases) {
        if (cache.count(p.surface()) || !queued.insert(p.surface()).second) continue;
        todo.push_back(&p);
    }
    KeywordStats local;
    std::set<std::string> hits;
    for (const auto& p : phrases) {
        if (cache.count(p.surface())) hits.insert(p.surface());
    }
    local.cached = hits.size();
    if (!todo.empty()) {
        auto mlm = make_mlm(config);
        if (!mlm)
            throw InputError(std::to_string(todo.size()) + " phrases have no cached keywords and no MLM provider is configured (first: '" +
                             todo.front()->surface() + "')");
        std::vector<std::string> queries;
        queries.reserve(todo.size());
        for (const auto* p : todo) queries.push_back(prompting::build_mlm_query(*p));
        const auto predictions = mlm->top_k(queries, config.mlm_fetch_k);
        if (predictions.size() != queries.size()) throw InvariantViolation("MLM returned wrong number of lists");
        const auto pc = prompt_config(config, config.mlm_fetch_k);
        for (std::size_t i = 0; i < todo.size(); ++i) {
            auto ks = prompting::select_keywords(*todo[i], predictions[i], pc);
            if (ks.keywords.empty()) {
                ++local.empty;
                warn("no usable keywords for '" + todo[i]->surface() + "'; prompt falls back to the plain template");
            }
            cache.emplace(todo[i]->surface(), std::move(ks));
        }
        local.probed = todo.size();
        if (!config.keywords.empty()) prompting::write_keyword_cache_file(config.keywords, cache);
    }
    if (stats) *stats = local;
    return cache;
}

std::vector<std::string> build_prompts(const RunConfig& config, const std::vector<Phrase>& phrases, std::size_t k,
                                       const prompting::KeywordCache& cache) {
    std::vector<std::string> out;
    out.reserve(phrases.size());
    for (const auto& p : phrases) {
        if (!config.prompt) {
            out.push_back(p.surface());
        } else if (k == 0) {
            out.push_back(prompting::build_prompt(p, KeywordSet{p.surface(), {}}));
        } else {
            out.push_back(prompting::build_prompt(p, cache.at(p.surface()), k));
        }
    }
    return out;
}

bool needs_keywords(const RunConfig& config, std::size_t max_k) { return config.prompt && max_k > 0; }

// Blob provider classes come from gold labels; unlabeled texts share one
// extra background class.
std::shared_ptr<const backend::EmbeddingProvider> make_provider(const RunConfig& config,
                                                               const std::vector<std::string>& texts,
                                                               const std::vector<std::optional<ClassId>>& labels,
                                                               std::size_t n_classes) {
    std::shared_ptr<const backend::EmbeddingProvider> p;
    if (config.provider == "synthetic-hash") {
        p = std::make_shared<backend::SyntheticHashProvider>(config.synthetic_seed, config.dim,
                                                             config.model_name.empty() ? "synthetic-hash" : config.model_name);
    } else if (config.provider == "synthetic-blob") {
        std::unordered_map<std::string, ClassId> assignment;
        bool background = false;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            const ClassId cls = labels[i] ? *labels[i] : n_classes;
            background |= !labels[i];
            auto [it, inserted] = assignment.emplace(texts[i], cls);
            if (!inserted && it->second != cls)
                throw InputError("text '" + texts[i] + "' maps to two classes under synthetic-blob");
        }
        const std::size_t n = n_classes + (background ? 1 : 0);
        p = std::make_shared<backend::SyntheticBlobProvider>(
            std::move(assignment), backend::orthogonal_centroids(n, std::max(config.dim, n)), config.sigma,
            config.synthetic_seed, config.model_name.empty() ? "synthetic-blob" : config.model_name);
    } else if (config.provider == "store") {
        require_file(config.store, "--store");
        p = std::make_shared<backend::StoreProvider>(config.store, config.model_name);
    } else if (config.provider == "remote") {
        backend::RemoteOptions opt;
        opt.endpoint = config.endpoint;
        opt.model_name = config.model_name;
        opt.max_batch = config.max_batch;
        opt.max_in_flight = config.max_in_flight;
        p = std::make_shared<backend::RemoteEmbeddingProvider>(std::move(opt));
    } else {
        throw InputError("unknown provider: " + config.provider);
    }
    if (config.provider == "remote" || !config.cache_dir.empty())
        p = std::make_shared<backend::CachingProvider>(std::move(p), config.cache_dir);
    return p;
}

// Embeds each distinct text once and fans the vectors back out.
std::vector<EmbeddingVector> embed_all(const backend::EmbeddingProvider& provider, const std::vector<std::string>& texts,
                                       bool normalize) {
    std::vector<std::string> unique;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& t : texts) {
        if (index.emplace(t, unique.size()).second) unique.push_back(t);
    }
    const auto vectors = provider.embed_batch(unique, normalize);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(vectors[index.at(t)]);
    return out;
}

std::vector<std::optional<ClassId>> optional_labels(const std::vector<Phrase>& phrases) {
    std::vector<std::optional<ClassId>> out;
    out.reserve(phrases.size());
    for (const auto& p : phrases) out.push_back(p.label());
    return out;
}

json models_json(const RunConfig& config, const backend::EmbeddingProvider& provider) {
    return json{{"embedding", provider.descriptor().model_name}, {"mlm", mlm_name(config)}};
}

json cluster_once(const RunConfig& config, const ingest::LabeledCorpus& corpus, std::size_t k_keywords,
                  const prompting::KeywordCache& cache) {
    const auto prompts = build_prompts(config, corpus.phrases, k_keywords, cache);
    const auto labels = corpus.labels();
    const auto provider = make_provider(config, prompts, optional_labels(corpus.phrases), corpus.classes.size());
    const auto vectors = embed_all(*provider, prompts, config.normalize);

    cluster::KMeansConfig kc;
    kc.n_restarts = config.restarts;
    kc.max_iter = config.max_iter;
    kc.tol = config.tol;
    kc.seed = config.seed;
    const auto result = cluster::kmeans(vectors, corpus.classes.size(), kc);
    const double recomputed = cluster::kmeans_objective(vectors, result.assignments, result.centroids);
    if (std::abs(recomputed - result.inertia) > 1e-6 * std::max(1.0, recomputed))
        throw InvariantViolation("k-means inertia does not match its objective");

    json rec;
    rec["command"] = "cluster";
    rec["dataset"] = corpus.dataset_id;
    rec["model"] = provider->descriptor().model_name;
    rec["models"] = models_json(config, *provider);
    rec["K"] = config.prompt ? k_keywords : 0;
    rec["prompted"] = config.prompt;
    rec["normalized"] = config.normalize;
    rec["acc"] = cluster::clustering_accuracy(result.assignments, labels);
    rec["nmi"] = cluster::nmi(result.assignments, labels);
    rec["inertia"] = result.inertia;
    rec["n"] = corpus.phrases.size();
    rec["k_clusters"] = corpus.classes.size();
    rec["seed"] = config.seed;
    return rec;
}

}  // namespace

std::vector<json> cmd_keywords(const RunConfig& config) {
    if (config.keywords.empty()) throw InputError("--keywords PATH is required");
    const auto corpus = load_corpus(config);
    KeywordStats stats;
    auto cache = resolve_keywords(config, corpus.phrases, &stats);
    if (stats.probed == 0) prompting::write_keyword_cache_file(config.keywords, cache);

    std::vector<json> records;
    emit(config, records,
         json{{"command", "keywords"},
              {"dataset", corpus.dataset_id},
              {"models", {{"mlm", mlm_name(config)}}},
              {"phrases", corpus.phrases.size()},
              {"probed", stats.probed},
              {"cached", stats.cached},
              {"empty", stats.empty}});
    return records;
}

std::vector<json> cmd_embed(const RunConfig& config) {
    if (config.store_out.empty()) throw InputError("--store-out PATH is required");
    const auto corpus = load_corpus(config);
    prompting::KeywordCache cache;
    if (needs_keywords(config, config.k)) cache = resolve_keywords(config, corpus.phrases);
    const auto prompts = build_prompts(config, corpus.phrases, config.k, cache);
    const auto provider = make_provider(config, prompts, optional_labels(corpus.phrases), corpus.classes.size());
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (const auto& t : prompts) {
        if (seen.insert(t).second) unique.push_back(t);
    }
    // Raw vectors; normalization is applied at read time.
    const auto store = backend::build_store(*provider, unique, false);
    backend::write_store(config.store_out, store);

    std::vector<json> records;
    emit(config, records,
         json{{"command", "embed"},
              {"dataset", corpus.dataset_id},
              {"models", models_json(config, *provider)},
              {"K", config.prompt ? config.k : 0},
              {"prompted", config.prompt},
              {"count", store.records.size()},
              {"dim", store.dim},
              {"path", config.store_out}});
    return records;
}

std::vector<json> cmd_cluster(const RunConfig& config) {
    const auto corpus = load_corpus(config);
    if (corpus.phrases.empty()) throw InputError("corpus is empty");
    prompting::KeywordCache cache;
    if (needs_keywords(config, config.k)) cache = resolve_keywords(config, corpus.phrases);
    std::vector<json> records;
    emit(config, records, cluster_once(config, corpus, config.k, cache));
    return records;
}

std::vector<json> cmd_sweep_k(const RunConfig& config) {
    if (config.k_values.empty()) throw InputError("--k-values must list at least one K");
    std::vector<std::size_t> ks;
    for (auto k : config.k_values) {
        if (std::find(ks.begin(), ks.end(), k) != ks.end()) {
            warn("duplicate K=" + std::to_string(k) + " ignored");
            continue;
        }
        if (k > config.mlm_fetch_k) throw InputError("K=" + std::to_string(k) + " exceeds mlm_fetch_k");
        ks.push_back(k);
    }
    if (!config.prompt) throw InputError("sweep-k requires prompting; drop --no-prompt");
    const auto corpus = load_corpus(config);
    if (corpus.phrases.empty()) throw InputError("corpus is empty");
    const auto max_k = *std::max_element(ks.begin(), ks.end());
    prompting::KeywordCache cache;
    if (needs_keywords(config, max_k)) cache = resolve_keywords(config, corpus.phrases);

    std::vector<json> records;
    for (auto k : ks) {
        auto rec = cluster_once(config, corpus, k, cache);
        rec["command"] = "sweep-k";
        emit(config, records, std::move(rec));
    }
    return records;
}

std::vector<json> cmd_expand(const RunConfig& config) {
    require_file(config.vocab, "--vocab");
    require_file(config.seeds, "--seeds");
    if (config.map_k.empty()) throw InputError("--map-k must list at least one K");
    const auto bench = ingest::load_expansion_benchmark_files(config.vocab, config.seeds);
    if (bench.queries.empty()) throw InputError("seed file has no queries");

    const std::size_t k_keywords = config.prompt ? config.k : 0;
    prompting::KeywordCache cache;
    if (needs_keywords(config, config.k)) cache = resolve_keywords(config, bench.vocabulary);
    const auto prompts = build_prompts(config, bench.vocabulary, config.k, cache);
    const auto provider = make_provider(config, prompts, optional_labels(bench.vocabulary), bench.classes.size());
    const auto vectors = embed_all(*provider, prompts, config.normalize);

    std::vector<expansion::VocabEntry> vocab;
    vocab.reserve(bench.vocabulary.size());
    for (std::size_t i = 0; i < bench.vocabulary.size(); ++i) vocab.push_back({bench.vocabulary[i], vectors[i]});

    const auto max_k = *std::max_element(config.map_k.begin(), config.map_k.end());
    const std::size_t candidates = vocab.size() >= 3 ? vocab.size() - 3 : 0;
    const std::size_t top_n = std::min(std::max(config.top_n, max_k), candidates);
    if (top_n == 0) throw InputError("vocabulary too small to expand");

    std::vector<expansion::ScoredQuery> scored;
    json per_query = json::array();
    for (const auto& q : bench.queries) {
        expansion::ScoredQuery sq{expansion::expand(q, vocab, top_n), expansion::relevant_set(bench, q)};
        json pq;
        pq["class"] = bench.classes[q.class_id];
        std::vector<std::string> seeds;
        for (const auto& s : q.seeds) seeds.push_back(s.surface());
        pq["seeds"] = seeds;
        pq["relevant"] = sq.relevant.size();
        for (auto k : config.map_k) pq["ap" + std::to_string(k)] = expansion::ap_at_k(sq.ranked, sq.relevant, k);
        per_query.push_back(std::move(pq));
        scored.push_back(std::move(sq));
    }

    json rec;
    rec["command"] = "expand";
    rec["dataset"] = config.dataset_id;
    rec["model"] = provider->descriptor().model_name;
    rec["models"] = models_json(config, *provider);
    rec["K_keywords"] = k_keywords;
    rec["prompted"] = config.prompt;
    for (auto k : config.map_k) rec["map" + std::to_string(k)] = expansion::map_at_k(scored, k);
    rec["per_query"] = std::move(per_query);
    rec["n_vocab"] = vocab.size();
    std::vector<json> records;
    emit(config, records, std::move(rec));
    return records;
}

std::vector<json> cmd_ground(const RunConfig& config) {
    grounding::GroundedVocab vocab;
    if (!config.grounded_vocab.empty()) {
        require_file(config.grounded_vocab, "--grounded-vocab");
        std::ifstream in(config.grounded_vocab);
        vocab = grounding::read_vocab(in, config.grounded_vocab);
        vocab.threshold = config.threshold;
    } else {
        require_file(config.captions, "--captions or --grounded-vocab");
        std::ifstream in(config.captions, std::ios::binary);
        vocab = grounding::build_grounded_vocab(in, config.threshold, config.captions);
    }
    if (!config.vocab_out.empty()) {
        std::ofstream out(config.vocab_out, std::ios::binary | std::ios::trunc);
        if (!out) throw FileNotFound(config.vocab_out);
        grounding::write_vocab(out, vocab);
    }

    const auto corpus = load_corpus(config);
    const auto cache = resolve_keywords(config, corpus.phrases);
    std::vector<std::string> phrase_texts;
    std::vector<std::string> keyword_texts;
    for (const auto& p : corpus.phrases) {
        phrase_texts.push_back(p.surface());
        const auto& kws = cache.at(p.surface()).keywords;
        const auto n = std::min(config.k, kws.size());
        keyword_texts.insert(keyword_texts.end(), kws.begin(), kws.begin() + static_cast<std::ptrdiff_t>(n));
    }
    const auto mode = config.phrase_level ? grounding::RatioMode::Phrase : grounding::RatioMode::Token;

    json rec;
    rec["command"] = "ground";
    rec["dataset"] = corpus.dataset_id;
    rec["models"] = {{"mlm", mlm_name(config)}};
    rec["corpus_id"] = vocab.corpus_id;
    rec["threshold"] = vocab.threshold;
    rec["grounded_words"] = vocab.words.size();
    rec["mode"] = config.phrase_level ? "phrase" : "token";
    rec["K"] = config.k;
    rec["phrase_ratio"] = grounding::grounding_ratio(phrase_texts, vocab, mode);
    rec["keyword_ratio"] = grounding::grounding_ratio(keyword_texts, vocab, mode);
    rec["n_phrases"] = phrase_texts.size();
    rec["n_keywords"] = keyword_texts.size();
    std::vector<json> records;
    emit(config, records, std::move(rec));
    return records;
}

namespace {

std::string fmt(const json& v, int precision = 3) {
    if (v.is_null()) return "-";
    if (v.is_number_float()) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(precision) << v.get<double>();
        return os.str();
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void table(std::ostringstream& os, const std::string& title, const std::vector<std::string>& cols,
           const std::vector<json>& rows) {
    if (rows.empty()) return;
    os << "## " << title << "\n\n|";
    for (const auto& c : cols) os << ' ' << c << " |";
    os << "\n|";
    for (std::size_t i = 0; i < cols.size(); ++i) os << "---|";
    os << '\n';
    for (const auto& r : rows) {
        os << '|';
        for (const auto& c : cols) {
            const auto it = r.find(c);
            const bool pct = c.find("ratio") != std::string::npos;
            std::string cell = "-";
            if (it != r.end()) cell = pct ? fmt(json(it->get<double>() * 100.0), 2) + "%" : fmt(*it);
            os << ' ' << cell << " |";
        }
        os << '\n';
    }
    os << '\n';
}

}  // namespace

std::string cmd_report(const RunConfig& config) {
    const std::string path = config.input.empty() ? config.output : config.input;
    require_file(path, "--input");
    std::ifstream in(path, std::ios::binary);
    std::map<std::string, std::vector<json>> by_command;
    std::set<std::string> map_cols;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw MalformedLine(lineno, e.what());
        }
        const auto cmd = rec.value("command", std::string("?"));
        if (cmd == "expand") {
            for (const auto& [key, v] : rec.items()) {
                if (key.rfind("map", 0) == 0 && v.is_number()) map_cols.insert(key);
            }
        }
        by_command[cmd == "sweep-k" ? "cluster" : cmd].push_back(std::move(rec));
    }

    std::ostringstream os;
    table(os, "Entity clustering", {"dataset", "model", "prompted", "K", "acc", "nmi", "n", "seed"}, by_command["cluster"]);
    std::vector<std::string> expand_cols = {"dataset", "model", "prompted", "K_keywords"};
    std::vector<std::string> maps(map_cols.begin(), map_cols.end());
    std::sort(maps.begin(), maps.end(), [](const std::string& a, const std::string& b) {
        return std::stoul(a.substr(3)) < std::stoul(b.substr(3));
    });
    expand_cols.insert(expand_cols.end(), maps.begin(), maps.end());
    table(os, "Entity set expansion", expand_cols, by_command["expand"]);
    table(os, "Visual grounding", {"dataset", "mode", "threshold", "phrase_ratio", "keyword_ratio"}, by_command["ground"]);
    return os.str();
}

}  // namespace phrasekit::cli
