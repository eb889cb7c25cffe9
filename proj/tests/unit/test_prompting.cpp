#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "phrasekit/prompting.hpp"

using namespace phrasekit;
using namespace phrasekit::prompting;

namespace {

std::vector<MlmPrediction> preds(std::initializer_list<const char*> tokens) {
    std::vector<MlmPrediction> out;
    double score = 1.0;
    for (const char* t : tokens) {
        const std::string s(t);
        const bool sub = s.rfind("##", 0) == 0;
        out.push_back({s, score, sub});
        score *= 0.5;
    }
    return out;
}

PromptConfig with_k(std::size_t k) {
    PromptConfig c;
    c.num_keywords = k;
    return c;
}

}  // namespace

TEST(MlmQuery, Template) {
    EXPECT_EQ(build_mlm_query(Phrase("United States")), "United States is a [mask]");
    EXPECT_EQ(build_mlm_query(Phrase("aspirin")), "aspirin is a [mask]");
    EXPECT_EQ(build_mlm_query(Phrase("W-NUT")), "W-NUT is a [mask]");
}

TEST(SelectKeywords, TopThree) {
    const auto ks = select_keywords(Phrase("United States"), preds({"country", "republic", "nation", "state"}), with_k(3));
    EXPECT_EQ(ks.keywords, (std::vector<std::string>{"country", "republic", "nation"}));
}

TEST(SelectKeywords, DropsSubwordsAndPunctuation) {
    const auto ks = select_keywords(Phrase("x"), preds({"##ism", "!", "city"}), with_k(1));
    EXPECT_EQ(ks.keywords, std::vector<std::string>{"city"});
}

TEST(SelectKeywords, DropsPhraseTokens) {
    const auto ks = select_keywords(Phrase("United States"), preds({"states", "union"}), with_k(1));
    EXPECT_EQ(ks.keywords, std::vector<std::string>{"union"});
}

TEST(SelectKeywords, CaseFoldDedup) {
    const auto ks = select_keywords(Phrase("x"), preds({"City", "city", "Town"}), with_k(3));
    EXPECT_EQ(ks.keywords, (std::vector<std::string>{"city", "town"}));
}

TEST(SelectKeywords, FewerThanK) {
    const auto ks = select_keywords(Phrase("x"), preds({"a", "1", "city"}), with_k(3));
    EXPECT_EQ(ks.keywords, std::vector<std::string>{"city"});
}

TEST(SelectKeywords, UnfilteredKeepsRawTokens) {
    PromptConfig c = with_k(3);
    c.filter = false;
    const auto ks = select_keywords(Phrase("United States"), preds({"States", "!", "a,b"}), c);
    EXPECT_EQ(ks.keywords, (std::vector<std::string>{"states", "!"}));
}

TEST(SelectKeywords, PrefixStableAndValid) {
    std::mt19937 rng(5);
    const std::vector<std::string> pool = {"city", "City", "town", "##s", "!", "x", "river", "state", "new",
                                           "york", "capital", "port", "2", "lake"};
    for (int t = 0; t < 300; ++t) {
        std::vector<MlmPrediction> p;
        for (int i = 0; i < 20; ++i) p.push_back({pool[rng() % pool.size()], 1.0 / (i + 1), false});
        const Phrase phrase("New York");
        const auto full = select_keywords(phrase, p, with_k(20));
        EXPECT_NO_THROW(full.validate());
        for (std::size_t k = 0; k <= 6; ++k) {
            const auto part = select_keywords(phrase, p, with_k(k));
            EXPECT_LE(part.keywords.size(), k);
            ASSERT_LE(part.keywords.size(), full.keywords.size());
            EXPECT_TRUE(std::equal(part.keywords.begin(), part.keywords.end(), full.keywords.begin()));
        }
    }
}

TEST(BuildPrompt, Exact) {
    const Phrase us("United States");
    EXPECT_EQ(build_prompt(us, KeywordSet{"United States", {"country", "republic", "nation"}}),
              "A photo of United States. A country, republic, nation");
    EXPECT_EQ(build_prompt(us, KeywordSet{"United States", {}}), "A photo of United States");
    EXPECT_EQ(build_prompt(Phrase("aspirin"), KeywordSet{"aspirin", {"drug"}}), "A photo of aspirin. A drug");
}

TEST(BuildPrompt, PrefixCut) {
    const Phrase us("United States");
    const KeywordSet ks{"United States", {"country", "republic", "nation"}};
    EXPECT_EQ(build_prompt(us, ks, 0), "A photo of United States");
    EXPECT_EQ(build_prompt(us, ks, 1), "A photo of United States. A country");
    EXPECT_EQ(build_prompt(us, ks, 10), build_prompt(us, ks));
}

TEST(BuildPrompt, SurfaceMismatch) {
    EXPECT_THROW(build_prompt(Phrase("a b"), KeywordSet{"c", {}}), InvalidArgument);
}

TEST(KeywordCacheFile, RoundTrip) {
    KeywordCache cache;
    cache["United States"] = {"United States", {"country", "republic", "nation"}};
    cache["aspirin"] = {"aspirin", {}};
    cache["Ünïcode"] = {"Ünïcode", {"name"}};
    std::stringstream buf;
    write_keyword_cache(buf, cache);
    const auto back = read_keyword_cache(buf);
    ASSERT_EQ(back.size(), cache.size());
    for (const auto& [surface, ks] : cache) {
        EXPECT_EQ(back.at(surface).phrase_surface, ks.phrase_surface);
        EXPECT_EQ(back.at(surface).keywords, ks.keywords);
    }
}
