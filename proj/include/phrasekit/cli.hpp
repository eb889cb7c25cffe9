#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace phrasekit::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kProvider = 3,
    kInternal = 4,
};

// Effective configuration of one invocation. Precedence: flag > config file > default.
struct RunConfig {
    std::string dataset_id = "dataset";
    // Inputs: canonical entity list, or a BIO token file.
    std::string corpus;
    std::string bio;
    int tag_column = -1;
    std::vector<std::string> exclude = {"MISC"};
    bool strict = false;
    bool mention_level = false;

    // Embedding provider.
    std::string provider = "synthetic-hash";
    std::string endpoint;
    std::string store;
    std::string model_name;
    std::size_t dim = 64;
    std::uint64_t synthetic_seed = 7;
    double sigma = 0.01;
    std::size_t max_batch = 32;
    std::size_t max_in_flight = 4;
    std::string cache_dir;

    // Keyword generation.
    std::string mlm_provider;  // "", "remote" or "fixture"
    std::string mlm_endpoint;
    std::string mlm_fixture;
    std::string mlm_model_name;
    std::string keywords;
    std::size_t k = 3;
    std::size_t mlm_fetch_k = 20;
    bool keyword_filter = true;
    bool prompt = true;
    std::vector<std::size_t> k_values = {0, 1, 2, 3, 4, 5, 6};

    // Clustering.
    bool normalize = true;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    std::size_t max_iter = 300;
    double tol = 1e-4;

    // Expansion.
    std::string vocab;
    std::string seeds;
    std::size_t top_n = 50;
    std::vector<std::size_t> map_k = {10, 30, 50};

    // Grounding.
    std::string captions;
    std::string grounded_vocab;
    std::string vocab_out;
    std::size_t threshold = 100;
    bool phrase_level = false;

    // Outputs.
    std::string output;
    std::string store_out;
    std::string input;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Hash of the canonical JSON form, excluding output locations.
std::string config_hash(const RunConfig& config);

// Command implementations. Each returns the records it emitted.
std::vector<nlohmann::json> cmd_keywords(const RunConfig& config);
std::vector<nlohmann::json> cmd_embed(const RunConfig& config);
std::vector<nlohmann::json> cmd_cluster(const RunConfig& config);
std::vector<nlohmann::json> cmd_sweep_k(const RunConfig& config);
std::vector<nlohmann::json> cmd_expand(const RunConfig& config);
std::vector<nlohmann::json> cmd_ground(const RunConfig& config);
// Renders the records of `config.input` as text tables.
std::string cmd_report(const RunConfig& config);

// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phrasekit::cli
