#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "phrasekit/cli.hpp"
#include "phrasekit/grounding.hpp"
#include "phrasekit/ingest.hpp"
#include "phrasekit/store.hpp"

using namespace phrasekit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = PHRASEKIT_TEST_DATA;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

// Warnings go to std::cerr, so capture it alongside the error stream.
Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err, warnings;
    auto* old = std::cerr.rdbuf(warnings.rdbuf());
    const int code = cli::run(args, out, err);
    std::cerr.rdbuf(old);
    return {code, out.str(), err.str() + warnings.str()};
}

int closed_port() {
    httplib::Server s;
    const int port = s.bind_to_any_port("127.0.0.1");
    std::thread t([&] { s.listen_after_bind(); });
    s.wait_until_ready();
    s.stop();
    t.join();
    return port;
}

std::vector<json> lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("phrasekit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Writes a two-class entity list with `per_class` entries each.
    std::string two_class_corpus(int per_class = 20) const {
        const auto p = path("corpus.tsv");
        std::ofstream out(p);
        for (int i = 0; i < per_class; ++i) {
            out << "city " << i << "\tLOC\n";
            out << "person " << i << "\tPER\n";
        }
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, KeywordsDeterministicAndWarmCache) {
    const std::vector<std::string> base = {"keywords", "--bio", kData + "/sample.bio", "--mlm-provider", "fixture",
                                           "--mlm-fixture", kData + "/mlm_fixture.json"};
    auto a = base, b = base;
    a.insert(a.end(), {"--keywords", path("a.tsv")});
    b.insert(b.end(), {"--keywords", path("b.tsv")});
    const auto ra = run(a);
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(run(b).code, 0);
    EXPECT_EQ(slurp(path("a.tsv")), slurp(path("b.tsv")));
    EXPECT_NE(slurp(path("a.tsv")).find("Paris\tcity,capital,town\n"), std::string::npos);
    EXPECT_NE(slurp(path("a.tsv")).find("York\tcity,town,place\n"), std::string::npos);

    const auto first = lines(ra.out);
    ASSERT_EQ(first.size(), 1u);
    EXPECT_EQ(first[0]["probed"], 8);

    // A warm cache needs no MLM at all.
    const auto warm = run({"keywords", "--bio", kData + "/sample.bio", "--keywords", path("a.tsv")});
    ASSERT_EQ(warm.code, 0) << warm.err;
    EXPECT_EQ(lines(warm.out)[0]["probed"], 0);
    EXPECT_EQ(lines(warm.out)[0]["cached"], 8);
}

TEST_F(CliTest, UnreachableMlmExitsThree) {
    const int port = closed_port();
    const auto r = run({"keywords", "--bio", kData + "/sample.bio", "--keywords", path("k.tsv"), "--mlm-provider",
                        "remote", "--mlm-endpoint", "http://127.0.0.1:" + std::to_string(port)});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("unavailable"), std::string::npos);
}

TEST_F(CliTest, ClusterBlobIsPerfect) {
    const auto r = run({"cluster", "--corpus", two_class_corpus(), "--provider", "synthetic-blob", "--sigma", "0.01",
                        "--no-prompt", "--output", path("out.jsonl")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto recs = lines(r.out);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0]["acc"], 1.0);
    EXPECT_NEAR(recs[0]["nmi"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(recs[0]["prompted"], false);
    EXPECT_EQ(recs[0]["K"], 0);
    EXPECT_EQ(recs[0]["k_clusters"], 2);
    EXPECT_TRUE(recs[0].contains("config_hash"));
    EXPECT_TRUE(recs[0].contains("timestamp"));
    EXPECT_EQ(lines(slurp(path("out.jsonl"))).size(), 1u);
}

TEST_F(CliTest, NoPromptChangesStoreKeys) {
    const auto corpus = two_class_corpus(2);
    ASSERT_EQ(run({"embed", "--corpus", corpus, "--no-prompt", "--store-out", path("raw.phem")}).code, 0);
    const auto zero = run({"embed", "--corpus", corpus, "--k", "0", "--store-out", path("prompted.phem")});
    ASSERT_EQ(zero.code, 0) << zero.err;
    const auto raw = backend::read_store(path("raw.phem"));
    const auto prompted = backend::read_store(path("prompted.phem"));
    EXPECT_EQ(raw.records[0].text, "city 0");
    EXPECT_EQ(prompted.records[0].text, "A photo of city 0");

    // The written store serves the same prompts back.
    const auto again = run({"cluster", "--corpus", corpus, "--k", "0", "--provider", "store", "--store",
                            path("prompted.phem")});
    EXPECT_EQ(again.code, 0) << again.err;
}

TEST_F(CliTest, MissingStoreExitsTwo) {
    const auto r = run({"cluster", "--corpus", two_class_corpus(), "--provider", "store", "--store",
                        path("nope.phem"), "--no-prompt"});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, BadFlagsExitTwo) {
    EXPECT_EQ(run({"cluster", "--provider", "gpu"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"cluster", "--no-prompt"}).code, 2);
}

TEST_F(CliTest, SweepK) {
    const std::vector<std::string> base = {"sweep-k", "--bio", kData + "/sample.bio", "--mlm-provider", "fixture",
                                           "--mlm-fixture", kData + "/mlm_fixture.json", "--provider",
                                           "synthetic-blob"};
    auto args = base;
    args.insert(args.end(), {"--k-values", "0,3,3"});
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto recs = lines(r.out);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0]["K"], 0);
    EXPECT_EQ(recs[1]["K"], 3);
    EXPECT_EQ(recs[0]["command"], "sweep-k");
    EXPECT_NE(r.err.find("duplicate"), std::string::npos);

    const auto cfg = path("empty.json");
    std::ofstream(cfg) << R"({"k_values": []})";
    auto empty = base;
    empty.insert(empty.end(), {"--config", cfg});
    EXPECT_EQ(run(empty).code, 2);
}

TEST_F(CliTest, ExpandSingleQuery) {
    const auto r = run({"expand", "--vocab", kData + "/expand_vocab.tsv", "--seeds", kData + "/expand_seeds.tsv",
                        "--provider", "synthetic-blob", "--mlm-provider", "fixture", "--mlm-fixture",
                        kData + "/mlm_fixture.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto recs = lines(r.out);
    ASSERT_EQ(recs.size(), 1u);
    ASSERT_EQ(recs[0]["per_query"].size(), 1u);
    EXPECT_EQ(recs[0]["per_query"][0]["relevant"], 1);
    EXPECT_EQ(recs[0]["map10"], 1.0);
    EXPECT_EQ(recs[0]["n_vocab"], 9);
}

TEST_F(CliTest, GroundMatchesLibrary) {
    const auto r = run({"ground", "--corpus", kData + "/ground_corpus.tsv", "--captions", kData + "/captions.txt",
                        "--threshold", "2", "--mlm-provider", "fixture", "--mlm-fixture",
                        kData + "/mlm_fixture.json", "--vocab-out", path("vocab.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = lines(r.out).at(0);
    EXPECT_EQ(rec["phrase_ratio"], 0.5);
    EXPECT_NEAR(rec["keyword_ratio"].get<double>(), 1.0 / 3.0, 1e-12);

    std::ifstream caps(kData + "/captions.txt");
    const auto vocab = grounding::build_grounded_vocab(caps, 2);
    EXPECT_EQ(rec["phrase_ratio"], grounding::grounding_ratio({"black cat", "United Nations"}, vocab));
    std::ifstream written(path("vocab.txt"));
    EXPECT_EQ(grounding::read_vocab(written).words, vocab.words);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
    const auto cfg = path("run.json");
    std::ofstream(cfg) << R"({"provider": "synthetic-blob", "seed": 5, "prompt": false})";
    const auto r = run({"cluster", "--config", cfg, "--corpus", two_class_corpus(), "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = lines(r.out).at(0);
    EXPECT_EQ(rec["seed"], 9);
    EXPECT_EQ(rec["model"], "synthetic-blob");

    std::ofstream(cfg) << R"({"no_such_key": 1})";
    EXPECT_EQ(run({"cluster", "--config", cfg, "--corpus", two_class_corpus()}).code, 2);
}

TEST_F(CliTest, MentionLevel) {
    const auto r = run({"cluster", "--bio", kData + "/sample.bio", "--mention-level", "--no-prompt"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).at(0)["n"], 9);
    const auto d = run({"cluster", "--bio", kData + "/sample.bio", "--no-prompt"});
    EXPECT_EQ(lines(d.out).at(0)["n"], 8);
}

TEST_F(CliTest, Report) {
    const auto out = path("results.jsonl");
    ASSERT_EQ(run({"cluster", "--corpus", two_class_corpus(), "--provider", "synthetic-blob", "--no-prompt",
                   "--output", out})
                  .code,
              0);
    ASSERT_EQ(run({"expand", "--vocab", kData + "/expand_vocab.tsv", "--seeds", kData + "/expand_seeds.tsv",
                   "--provider", "synthetic-blob", "--no-prompt", "--output", out})
                  .code,
              0);
    const auto r = run({"report", "--input", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("1.000"), std::string::npos);
    EXPECT_NE(r.out.find("|"), std::string::npos);
    EXPECT_EQ(run({"report", "--input", path("missing.jsonl")}).code, 2);
}
