#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "stylus/classify.hpp"
#include "stylus/error.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

using namespace stylus;

namespace {

Sample make_sample(std::string id, std::string label, std::string text) {
    Sample s;
    s.sample_id = std::move(id);
    s.novel_id = "n_" + label;
    s.class_label = std::move(label);
    s.text = std::move(text);
    s.word_count = 20;
    return s;
}

struct PlantedCorpus {
    std::vector<Sample> train;
    std::vector<Sample> test;
    std::vector<std::string> markers;
};

// 4 classes over a shared filler vocabulary; each class injects its own
// marker word at a 5% rate. Filler counts vary freely per sample.
PlantedCorpus planted_corpus(size_t train_per_class, size_t test_per_class, uint64_t seed) {
    const std::vector<std::string> filler = {"the", "and", "walk", "stone", "river",
                                             "cold", "light", "evening", "door", "voice"};
    PlantedCorpus corpus;
    corpus.markers = {"markeralpha", "markerbeta", "markergamma", "markerdelta"};
    SplitMix64 rng(seed);
    for (size_t c = 0; c < corpus.markers.size(); ++c) {
        std::string label = "class" + std::to_string(c);
        for (size_t s = 0; s < train_per_class + test_per_class; ++s) {
            std::ostringstream text;
            for (int w = 0; w < 20; ++w) {
                if (w) text << ' ';
                if (rng.next_below(20) == 0) // 5% marker rate
                    text << corpus.markers[c];
                else
                    text << filler[rng.next_below(filler.size())];
            }
            // every sample carries at least one marker so the test oracle
            // (nearest marker frequency) is exact
            std::string body = text.str() + " " + corpus.markers[c];
            std::string id = label + "-" + std::to_string(s);
            if (s < train_per_class)
                corpus.train.push_back(make_sample(id, label, body));
            else
                corpus.test.push_back(make_sample(id, label, body));
        }
    }
    return corpus;
}

// Same markers but a fixed filler multiset per sample (order shuffled), so
// filler dimensions have zero between-class variance and the marker signal
// decides every prediction.
PlantedCorpus balanced_planted_corpus(size_t train_per_class, size_t test_per_class,
                                      uint64_t seed) {
    const std::vector<std::string> filler = {"the", "and", "walk", "stone", "river",
                                             "cold", "light", "evening", "door", "voice",
                                             "grey"};
    PlantedCorpus corpus;
    corpus.markers = {"markeralpha", "markerbeta", "markergamma", "markerdelta"};
    SplitMix64 rng(seed);
    for (size_t c = 0; c < corpus.markers.size(); ++c) {
        std::string label = "class" + std::to_string(c);
        for (size_t s = 0; s < train_per_class + test_per_class; ++s) {
            std::vector<std::string> words;
            for (const auto& w : filler) {
                words.push_back(w);
                words.push_back(w);
            }
            words.push_back(corpus.markers[c]);
            words.push_back(corpus.markers[c]);
            seeded_shuffle(words, rng);
            std::ostringstream text;
            for (size_t w = 0; w < words.size(); ++w) {
                if (w) text << ' ';
                text << words[w];
            }
            std::string id = label + "-" + std::to_string(s);
            if (s < train_per_class)
                corpus.train.push_back(make_sample(id, label, text.str()));
            else
                corpus.test.push_back(make_sample(id, label, text.str()));
        }
    }
    return corpus;
}

// 3 classes with fully disjoint, purely alphabetic vocabularies.
std::vector<Sample> disjoint_corpus(size_t per_class, uint64_t seed) {
    const char* prefixes[] = {"axo", "bel", "cor"};
    std::vector<Sample> train;
    SplitMix64 rng(seed);
    for (size_t c = 0; c < 3; ++c) {
        std::string label = "class" + std::to_string(c);
        for (size_t s = 0; s < per_class; ++s) {
            std::ostringstream text;
            for (int w = 0; w < 15; ++w) {
                if (w) text << ' ';
                text << prefixes[c] << "word";
                size_t n = rng.next_below(40);
                text << static_cast<char>('a' + n / 26) << static_cast<char>('a' + n % 26);
            }
            train.push_back(make_sample(label + "-" + std::to_string(s), label, text.str()));
        }
    }
    return train;
}

double l2_norm(const std::vector<double>& v) {
    double ss = 0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss);
}

} // namespace

TEST_CASE("delta profiles: identical classes give all-zero z") {
    std::vector<Sample> train = {make_sample("a1", "a", "the same text here"),
                                 make_sample("b1", "b", "the same text here")};
    auto model = build_delta_profiles(train, 10);
    for (const auto& profile : model.profiles)
        for (double z : profile.z) CHECK(z == 0.0);
}

TEST_CASE("delta profiles: planted markers dominate their own class") {
    auto corpus = planted_corpus(50, 0, 77);
    auto model = build_delta_profiles(corpus.train, 100);

    // brute-force frequencies: marker rate is ~0 in other classes, so the
    // marker dimension must carry the max z within its own profile
    for (size_t c = 0; c < corpus.markers.size(); ++c) {
        const auto& profile = model.profiles[c];
        CHECK(profile.class_label == "class" + std::to_string(c));
        size_t marker_dim = SIZE_MAX;
        for (size_t w = 0; w < model.mfw.size(); ++w)
            if (model.mfw[w] == corpus.markers[c]) marker_dim = w;
        REQUIRE(marker_dim != SIZE_MAX);
        double max_z = *std::max_element(profile.z.begin(), profile.z.end());
        CHECK(profile.z[marker_dim] == doctest::Approx(max_z));
    }
}

TEST_CASE("delta profiles: z statistics and k clamping") {
    auto corpus = planted_corpus(30, 0, 3);
    auto model = build_delta_profiles(corpus.train, 1000000); // k > vocabulary
    CHECK(model.mfw.size() < 1000000);

    const double n = static_cast<double>(model.profiles.size());
    for (size_t w = 0; w < model.mfw.size(); ++w) {
        double mean = 0;
        for (const auto& p : model.profiles) mean += p.z[w];
        mean /= n;
        double ss = 0;
        for (const auto& p : model.profiles) ss += (p.z[w] - mean) * (p.z[w] - mean);
        double sd = std::sqrt(ss / (n - 1));
        if (model.stdev[w] > 0) {
            CHECK(std::fabs(mean) < 1e-9);
            CHECK(std::fabs(sd - 1.0) < 1e-9);
        } else {
            CHECK(sd == 0.0);
        }
    }
}

TEST_CASE("delta_predict: planted corpus classifies perfectly") {
    auto corpus = balanced_planted_corpus(60, 20, 123);
    auto model = build_delta_profiles(corpus.train, 100);
    DeltaPredictor predictor(model);
    for (const auto& sample : corpus.test) {
        auto pred = predictor.predict(sample);
        CHECK(pred.label == sample.class_label);
        CHECK_FALSE(pred.degenerate);
    }
}

TEST_CASE("delta_predict: self-similarity and degenerate input") {
    std::vector<Sample> train = {make_sample("a1", "a", "apple apple orchard autumn"),
                                 make_sample("b1", "b", "bridge bridge winter stone")};
    auto model = build_delta_profiles(train, 8);
    CHECK(delta_predict(make_sample("q", "?", "apple apple orchard autumn"), model).label == "a");

    auto degen = delta_predict(make_sample("q", "?", "zzz yyy qqq"), model);
    CHECK(degen.degenerate);
    CHECK(degen.label == "a"); // lexicographically first class
}

TEST_CASE("delta_predict: invariant to repeating the text") {
    auto corpus = planted_corpus(40, 5, 9);
    auto model = build_delta_profiles(corpus.train, 80);
    DeltaPredictor predictor(model);
    for (const auto& sample : corpus.test) {
        Sample doubled = sample;
        doubled.text = sample.text + " " + sample.text; // all counts scaled by 2
        CHECK(predictor.predict(doubled).label == predictor.predict(sample).label);
    }
}

TEST_CASE("delta errors") {
    CHECK_THROWS_AS(build_delta_profiles({}, 10), Error);
}

TEST_CASE("svm: disjoint vocabularies train to >= 99% accuracy") {
    auto train = disjoint_corpus(100, 11);
    auto model = train_svm(train, 1e-4, 10, 42);
    SvmPredictor predictor(model);
    size_t correct = 0;
    for (const auto& sample : train)
        if (predictor.predict(sample).label == sample.class_label) ++correct;
    CHECK(static_cast<double>(correct) / static_cast<double>(train.size()) >= 0.99);
}

TEST_CASE("svm: same seed trains bit-identical weights") {
    auto train = disjoint_corpus(40, 5);
    auto a = train_svm(train, 1e-3, 4, 7);
    auto b = train_svm(train, 1e-3, 4, 7);
    REQUIRE(a.weights.size() == b.weights.size());
    for (size_t c = 0; c < a.weights.size(); ++c) {
        CHECK(a.bias[c] == b.bias[c]);
        for (size_t w = 0; w < a.weights[c].size(); ++w)
            CHECK(a.weights[c][w] == b.weights[c][w]);
    }
    auto other_seed = train_svm(train, 1e-3, 4, 8);
    bool any_different = false;
    for (size_t c = 0; c < a.weights.size() && !any_different; ++c)
        for (size_t w = 0; w < a.weights[c].size(); ++w)
            if (a.weights[c][w] != other_seed.weights[c][w]) {
                any_different = true;
                break;
            }
    CHECK(any_different);
}

TEST_CASE("svm: weight norms shrink as regularization grows") {
    auto train = disjoint_corpus(60, 13);
    double previous = 1e300;
    for (double reg : {1e-3, 1e-1, 10.0}) {
        auto model = train_svm(train, reg, 6, 3);
        double norm = 0;
        for (const auto& w : model.weights) norm += l2_norm(w);
        CHECK(norm < previous);
        previous = norm;
    }
}

TEST_CASE("svm: idf formula and prediction invariants") {
    auto train = disjoint_corpus(30, 21);
    auto model = train_svm(train, 1e-4, 6, 1);
    // idf of a word in df docs out of N: ln((1+N)/(1+df)) + 1
    const double n_docs = static_cast<double>(train.size());
    std::map<std::string, size_t> df;
    for (const auto& sample : train) {
        std::set<std::string> seen;
        for (auto& w : word_tokens(sample.text)) seen.insert(w);
        for (const auto& w : seen) ++df[w];
    }
    for (size_t i = 0; i < model.vocabulary.size(); ++i) {
        const double expect =
            std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df.at(model.vocabulary[i])))) +
            1.0;
        CHECK(model.idf[i] == doctest::Approx(expect).epsilon(1e-12));
    }

    SvmPredictor predictor(model);
    Sample sample = train.front();
    // appending out-of-vocabulary words cannot change the argmax
    Sample extended = sample;
    extended.text += " zzzunknown qqqunseen";
    CHECK(predictor.predict(extended).label == predictor.predict(sample).label);
    // scale invariance via the per-document L2 normalization
    Sample doubled = sample;
    doubled.text = sample.text + " " + sample.text;
    CHECK(predictor.predict(doubled).label == predictor.predict(sample).label);

    auto degen = predictor.predict(make_sample("x", "?", "entirely unseen tokens"));
    CHECK(degen.degenerate);
    CHECK(degen.label == model.classes.front());
}

TEST_CASE("svm errors") {
    std::vector<Sample> one_class = {make_sample("a1", "a", "only one class here")};
    CHECK_THROWS_AS(train_svm(one_class, 1e-4, 2, 0), Error);
}

TEST_CASE("model files round trip") {
    auto corpus = planted_corpus(20, 0, 2);
    auto dir = std::filesystem::temp_directory_path() / "stylus_model_test";
    std::filesystem::create_directories(dir);

    auto delta = build_delta_profiles(corpus.train, 50);
    delta.save(dir / "delta.json");
    auto delta2 = DeltaModel::load(dir / "delta.json");
    CHECK(delta2.mfw == delta.mfw);
    CHECK(delta2.mean == delta.mean);
    CHECK(delta2.stdev == delta.stdev);
    REQUIRE(delta2.profiles.size() == delta.profiles.size());
    for (size_t i = 0; i < delta.profiles.size(); ++i) CHECK(delta2.profiles[i].z == delta.profiles[i].z);

    auto svm = train_svm(disjoint_corpus(20, 1), 1e-3, 3, 5);
    svm.save(dir / "svm.json");
    auto svm2 = TfidfModel::load(dir / "svm.json");
    CHECK(svm2.vocabulary == svm.vocabulary);
    CHECK(svm2.idf == svm.idf);
    CHECK(svm2.weights == svm.weights);
    CHECK(svm2.bias == svm.bias);
    std::filesystem::remove_all(dir);
}

TEST_CASE("classifiers only emit labels from the class set") {
    auto corpus = planted_corpus(30, 10, 77);
    auto delta = build_delta_profiles(corpus.train, 60);
    auto svm = train_svm(corpus.train, 1e-3, 3, 2);
    DeltaPredictor dp(delta);
    SvmPredictor sp(svm);
    std::set<std::string> classes(svm.classes.begin(), svm.classes.end());
    SplitMix64 rng(3);
    const std::vector<std::string> junk = {"zzz", "the", "markeralpha", "qqq", "and"};
    for (int trial = 0; trial < 50; ++trial) {
        std::string text;
        for (size_t w = 0; w < 1 + rng.next_below(8); ++w)
            text += (w ? " " : "") + junk[rng.next_below(junk.size())];
        Sample s = make_sample("t" + std::to_string(trial), "?", text);
        CHECK(classes.count(dp.predict(s).label) == 1);
        CHECK(classes.count(sp.predict(s).label) == 1);
        CHECK(classes.count(random_predict(s, svm.classes, 5)) == 1);
    }
}

TEST_CASE("random baseline: single class, determinism, in-set labels") {
    std::vector<std::string> classes = {"only"};
    Sample s = make_sample("s1", "only", "text");
    CHECK(random_predict(s, classes, 5) == "only");

    std::vector<std::string> many = {"a", "b", "c", "d", "e"};
    for (int i = 0; i < 200; ++i) {
        Sample sample = make_sample("id" + std::to_string(i), "a", "text");
        std::string first = random_predict(sample, many, 9);
        CHECK(random_predict(sample, many, 9) == first); // reproducible
        CHECK(std::find(many.begin(), many.end(), first) != many.end());
    }
}
