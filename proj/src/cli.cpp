#include "phrasekit/cli.hpp"

#include <fstream>
#include <functional>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "phrasekit/errors.hpp"

namespace phrasekit::cli {

namespace {

// Registers options whose values only override the config when given.
class Overrides {
public:
    explicit Overrides(CLI::App& app) : app_(app) {}

    template <typename T>
    CLI::Option* option(const std::string& name, T RunConfig::*field, const std::string& help) {
        auto value = std::make_shared<T>();
        auto* opt = app_.add_option(name, *value, help);
        apply_.push_back([opt, value, field](RunConfig& c) {
            if (opt->count() > 0) c.*field = *value;
        });
        return opt;
    }

    // Presence of the flag stores `when_set` into the field.
    CLI::Option* flag(const std::string& name, bool RunConfig::*field, bool when_set, const std::string& help) {
        auto* opt = app_.add_flag(name, help);
        apply_.push_back([opt, field, when_set](RunConfig& c) {
            if (opt->count() > 0) c.*field = when_set;
        });
        return opt;
    }

    void apply(RunConfig& c) const {
        for (const auto& f : apply_) f(c);
    }

private:
    CLI::App& app_;
    std::vector<std::function<void(RunConfig&)>> apply_;
};

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse config " + path + ": " + e.what());
    }
    RunConfig c;
    from_json(j, c);
    return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phrase embedding evaluation toolkit: domain-aware prompting, entity clustering, "
                 "entity set expansion and visual grounding ratios."};
    app.name("phrasekit");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

    Overrides o(app);
    o.option("--dataset-id", &RunConfig::dataset_id, "dataset name used in records");
    o.option("--corpus", &RunConfig::corpus, "entity list (surface<TAB>class)");
    o.option("--bio", &RunConfig::bio, "BIO token file");
    o.option("--tag-column", &RunConfig::tag_column, "BIO tag column (negative counts from the end)");
    o.option("--exclude", &RunConfig::exclude, "classes dropped from BIO spans")->delimiter(',');
    o.flag("--strict", &RunConfig::strict, true, "abort on malformed BIO lines");
    o.flag("--mention-level", &RunConfig::mention_level, true, "cluster every mention instead of unique surfaces");

    o.option("--provider", &RunConfig::provider, "embedding provider")
        ->check(CLI::IsMember({"remote", "store", "synthetic-hash", "synthetic-blob"}));
    o.option("--endpoint", &RunConfig::endpoint, "model service URL, e.g. http://127.0.0.1:8765");
    o.option("--store", &RunConfig::store, "embedding store file (store provider)");
    o.option("--model-name", &RunConfig::model_name, "embedding model name for records and cache keys");
    o.option("--dim", &RunConfig::dim, "synthetic embedding dimension");
    o.option("--synthetic-seed", &RunConfig::synthetic_seed, "seed of the synthetic providers");
    o.option("--sigma", &RunConfig::sigma, "synthetic-blob noise sigma");
    o.option("--max-batch", &RunConfig::max_batch, "texts per remote request");
    o.option("--max-in-flight", &RunConfig::max_in_flight, "concurrent remote requests");
    o.option("--cache-dir", &RunConfig::cache_dir, "embedding cache directory");

    o.option("--mlm-provider", &RunConfig::mlm_provider, "keyword source")->check(CLI::IsMember({"remote", "fixture"}));
    o.option("--mlm-endpoint", &RunConfig::mlm_endpoint, "MLM service URL (defaults to --endpoint)");
    o.option("--mlm-fixture", &RunConfig::mlm_fixture, "JSON file of canned MLM predictions");
    o.option("--mlm-model-name", &RunConfig::mlm_model_name, "MLM model name for records");
    o.option("--keywords", &RunConfig::keywords, "keyword cache file");
    o.option("--k", &RunConfig::k, "number of keywords per prompt");
    o.option("--mlm-fetch-k", &RunConfig::mlm_fetch_k, "raw MLM predictions fetched per phrase");
    o.flag("--no-keyword-filter", &RunConfig::keyword_filter, false, "keep raw MLM tokens (lowercased, deduplicated)");
    o.flag("--no-prompt", &RunConfig::prompt, false, "embed bare phrases");
    o.option("--k-values", &RunConfig::k_values, "K values for sweep-k")->delimiter(',');

    o.flag("--no-normalize", &RunConfig::normalize, false, "cluster raw vectors instead of unit vectors");
    o.option("--seed", &RunConfig::seed, "k-means seed");
    o.option("--restarts", &RunConfig::restarts, "k-means restarts");
    o.option("--max-iter", &RunConfig::max_iter, "k-means iteration cap");
    o.option("--tol", &RunConfig::tol, "k-means centroid shift tolerance");

    o.option("--vocab", &RunConfig::vocab, "expansion vocabulary (surface[<TAB>class])");
    o.option("--seeds", &RunConfig::seeds, "seed queries (class<TAB>s1<TAB>s2<TAB>s3)");
    o.option("--top-n", &RunConfig::top_n, "ranked list length");
    o.option("--map-k", &RunConfig::map_k, "MAP cutoffs")->delimiter(',');

    o.option("--captions", &RunConfig::captions, "caption file, one caption per line");
    o.option("--grounded-vocab", &RunConfig::grounded_vocab, "precomputed grounded vocabulary");
    o.option("--vocab-out", &RunConfig::vocab_out, "write the grounded vocabulary here");
    o.option("--threshold", &RunConfig::threshold, "minimum caption count (exclusive)");
    o.flag("--phrase-level", &RunConfig::phrase_level, true, "ratio of texts with any grounded token");

    o.option("--output", &RunConfig::output, "append JSON records to this file");
    o.option("--store-out", &RunConfig::store_out, "store written by `embed`");
    o.option("--input", &RunConfig::input, "results file read by `report`");

    auto* keywords = app.add_subcommand("keywords", "probe the MLM and fill the keyword cache");
    auto* embed = app.add_subcommand("embed", "embed corpus prompts into a store file");
    auto* cluster = app.add_subcommand("cluster", "k-means entity clustering with ACC/NMI");
    auto* sweep = app.add_subcommand("sweep-k", "clustering for each keyword count");
    auto* expand = app.add_subcommand("expand", "entity set expansion with MAP@K");
    auto* ground = app.add_subcommand("ground", "visual grounding ratios of phrases and keywords");
    auto* report = app.add_subcommand("report", "render a results file as tables");

    std::vector<const char*> argv;
    argv.push_back("phrasekit");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config_file(config_path);
        o.apply(config);

        std::vector<nlohmann::json> records;
        if (keywords->parsed()) records = cmd_keywords(config);
        if (embed->parsed()) records = cmd_embed(config);
        if (cluster->parsed()) records = cmd_cluster(config);
        if (sweep->parsed()) records = cmd_sweep_k(config);
        if (expand->parsed()) records = cmd_expand(config);
        if (ground->parsed()) records = cmd_ground(config);
        if (report->parsed()) out << cmd_report(config);
        for (const auto& r : records) out << r.dump() << '\n';
        return kOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ProviderError& e) {
        err << "provider error: " << e.what() << '\n';
        return kProvider;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace phrasekit::cli
