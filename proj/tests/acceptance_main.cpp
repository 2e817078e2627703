// Acceptance suite: one pass/fail line per criterion, each with a hard
// runtime budget. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "stylus/analysis.hpp"
#include "stylus/classify.hpp"
#include "stylus/corpus.hpp"
#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/perturb.hpp"
#include "stylus/pipeline.hpp"
#include "stylus/probe_io.hpp"
#include "stylus/rng.hpp"
#include "stylus/splitter.hpp"
#include "stylus/text.hpp"

#include "acceptance_stopwords.inc"

using namespace stylus;
namespace fs = std::filesystem;

namespace {

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw check_failure(message);
}

struct skip_criterion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path g_toy_dir;

// ---------------------------------------------------------------------------
// shared fixtures

const std::string kSentence =
    "``Then come with me,'' said Mrs. Sowerberry: taking up a dim and dirty lamp, and "
    "leading the way upstairs; ``your bed's under the counter.''";

Sample sowerberry_sample() {
    Sample s;
    s.sample_id = "golden-1";
    s.novel_id = "golden";
    s.class_label = "author";
    s.text = kSentence;
    s.word_count = static_cast<int>(count_whitespace_tokens(s.text));
    return s;
}

std::multiset<std::string> token_multiset(const std::string& text) {
    std::multiset<std::string> tokens;
    for (auto span : whitespace_token_spans(text))
        tokens.insert(text.substr(span.begin, span.size()));
    return tokens;
}

Sample make_sample(std::string id, std::string label, std::string text, bool withheld = false) {
    Sample s;
    s.sample_id = std::move(id);
    s.novel_id = "novel_" + label;
    s.class_label = std::move(label);
    s.text = std::move(text);
    s.word_count = static_cast<int>(count_whitespace_tokens(s.text));
    s.from_withheld_novel = withheld;
    return s;
}

// ---------------------------------------------------------------------------
// criterion 1: golden variant suite

void criterion_golden_variants() {
    const auto& lexicon = StopwordLexicon::builtin();
    Sample sample = sowerberry_sample();
    auto propn = heuristic_propn(sample, lexicon);

    auto run = [&](const char* id) {
        return apply_variant(sample, VariantSpec::parse(id, 20260214), lexicon, &propn);
    };

    require(run("normal") == kSentence, "normal must be the identity");
    require(run("lowercase") ==
                "``then come with me,'' said mrs. sowerberry: taking up a dim and dirty lamp, "
                "and leading the way upstairs; ``your bed's under the counter.''",
            "lowercase golden mismatch");
    require(run("no_punctuation") ==
                "Then come with me said Mrs Sowerberry taking up a dim and dirty lamp and "
                "leading the way upstairs your beds under the counter",
            "no_punctuation golden mismatch");
    require(run("mask_stopwords_all") ==
                "``<STOP> come <STOP> <STOP>,'' said Mrs. Sowerberry: taking <STOP> <STOP> dim "
                "<STOP> dirty lamp, <STOP> leading <STOP> way upstairs; ``<STOP> bed'<STOP> "
                "<STOP> <STOP> counter.''",
            "stop-word golden mismatch");
    require(run("mask_propn") ==
                "``Then come with me,'' said Mrs. <PROPN>: taking up a dim and dirty lamp, and "
                "leading the way upstairs; ``your bed's under the counter.''",
            "proper-noun golden mismatch");

    // shuffle: multiset equality plus seeded determinism
    std::string shuffled = run("shuffle");
    require(token_multiset(shuffled) == token_multiset(kSentence),
            "shuffle must permute the token multiset");
    require(shuffled == run("shuffle"), "shuffle must be seed-deterministic");

    // all modifications: multiset equality with the published output, then
    // token-wise verification of the masking/casing/punctuation rules
    std::string all_mod = run("all_modifications");
    require(token_multiset(all_mod) ==
                token_multiset("taking upstairs <STOP> <STOP> <STOP> leading come lamp way "
                               "<STOP> <STOP> <PROPN> bed<STOP> <STOP> <STOP> <STOP> dirty "
                               "counter <STOP> mrs dim said <STOP> <STOP>"),
            "all_modifications token multiset mismatch");
    for (auto span : whitespace_token_spans(all_mod)) {
        std::string token = all_mod.substr(span.begin, span.size());
        if (token == "<PROPN>") continue;
        // strip mask-token occurrences, then verify what remains
        std::string residue;
        for (size_t i = 0; i < token.size();) {
            if (token.compare(i, 6, "<STOP>") == 0) {
                i += 6;
                continue;
            }
            residue.push_back(token[i]);
            ++i;
        }
        for (char c : residue) {
            require(!is_punct_cp(static_cast<unsigned char>(c)),
                    "all_modifications token retains punctuation: " + token);
            require(!(c >= 'A' && c <= 'Z'),
                    "all_modifications token retains uppercase: " + token);
        }
        if (!residue.empty())
            require(!lexicon.contains(StopCategory::all, residue),
                    "all_modifications token retains a stop word: " + token);
    }
}

// ---------------------------------------------------------------------------
// criterion 2: lexicon equality

void criterion_lexicon_equality() {
    const auto& lexicon = StopwordLexicon::builtin();
    auto check = [&](StopCategory cat, const std::set<std::string>& expected, const char* name) {
        require(lexicon.category(cat) == expected,
                std::string("category '") + name + "' differs from the published list");
    };
    check(StopCategory::all, expected_stopwords::all, "all");
    check(StopCategory::adjective, expected_stopwords::adjective, "adjective");
    check(StopCategory::adverb, expected_stopwords::adverb, "adverb");
    check(StopCategory::conjunction, expected_stopwords::conjunction, "conjunction");
    check(StopCategory::contraction, expected_stopwords::contraction, "contraction");
    check(StopCategory::determiner, expected_stopwords::determiner, "determiner");
    check(StopCategory::noun, expected_stopwords::noun, "noun");
    check(StopCategory::preposition, expected_stopwords::preposition, "preposition");
    check(StopCategory::pronoun, expected_stopwords::pronoun, "pronoun");
    check(StopCategory::verb, expected_stopwords::verb, "verb");
}

// ---------------------------------------------------------------------------
// criterion 3: split arithmetic

void criterion_split_arithmetic() {
    auto build = [](Task task, size_t classes, size_t novels_per_class, size_t per_novel) {
        CorpusManifest manifest;
        manifest.task = task;
        std::vector<Sample> samples;
        for (size_t c = 0; c < classes; ++c) {
            std::string label = "class" + std::to_string(c);
            manifest.classes.push_back(label);
            for (size_t n = 0; n < novels_per_class; ++n) {
                NovelMeta meta;
                meta.novel_id = label + "_n" + std::to_string(n);
                meta.class_label = label;
                meta.withheld = n == 0;
                manifest.novels.push_back(meta);
                manifest.samples_per_novel[meta.novel_id] = per_novel;
                for (size_t s = 0; s < per_novel; ++s) {
                    Sample sample = make_sample(meta.novel_id + "-" + std::to_string(s), label,
                                                "text", meta.withheld);
                    sample.novel_id = meta.novel_id;
                    samples.push_back(std::move(sample));
                }
            }
        }
        return std::make_pair(manifest, samples);
    };

    // 27 authors x 3 novels (1 withheld) with >= 675 qualifying samples each
    auto [authorship, authorship_samples] = build(Task::authorship, 27, 3, 700);
    auto a = assign_splits(authorship, authorship_samples, SplitSpec::authorship_defaults(99));
    require(a.count(SplitTag::train) == 29160, "authorship train size");
    require(a.count(SplitTag::val) == 1836, "authorship val size");
    require(a.count(SplitTag::test) == 8181, "authorship test size");

    // 5 genres x 6 novels (1 withheld)
    auto [genre, genre_samples] = build(Task::genre, 5, 6, 450);
    auto g = assign_splits(genre, genre_samples, SplitSpec::genre_defaults(99));
    require(g.count(SplitTag::train) == 8000, "genre train size");
    require(g.count(SplitTag::val) == 500, "genre val size");
    require(g.count(SplitTag::test) == 1800, "genre test size");
}

// ---------------------------------------------------------------------------
// criterion 4: fightin' words oracle

void criterion_fightin_oracle() {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t groups = 2 + rng.next_below(4);
        const size_t tokens = 2 + rng.next_below(49);
        const bool integers = trial % 2 == 0;
        std::vector<WeightTriple> triples;
        for (size_t g = 0; g < groups; ++g)
            for (size_t t = 0; t < tokens; ++t) {
                double w = integers ? static_cast<double>(1 + rng.next_below(40))
                                    : 0.05 + rng.next_double() * 25.0;
                triples.push_back({"g" + std::to_string(g), "t" + std::to_string(t), w});
            }
        auto matrix = WeightMatrix::from_triples(triples, WeightKind::attention_sum);
        const double alpha0 = 0.01 * static_cast<double>(matrix.token_types().size());
        auto result = fightin_words(matrix, "g0", "g1", alpha0);

        // straight-line evaluation
        const size_t i = matrix.group_index("g0");
        const size_t j = matrix.group_index("g1");
        double ni = 0, nj = 0;
        for (size_t t = 0; t < matrix.token_types().size(); ++t) {
            ni += matrix.at(i, t);
            nj += matrix.at(j, t);
        }
        std::map<std::string, double> expected;
        const double v = static_cast<double>(matrix.token_types().size());
        for (size_t t = 0; t < matrix.token_types().size(); ++t) {
            const double yi = matrix.at(i, t);
            const double yj = matrix.at(j, t);
            const double aw = alpha0 / v;
            const double delta = std::log((yi + aw) / (ni + alpha0 - yi - aw)) -
                                 std::log((yj + aw) / (nj + alpha0 - yj - aw));
            const double sigma2 = 1.0 / (yi + aw) + 1.0 / (yj + aw);
            expected[matrix.token_types()[t]] = delta / std::sqrt(sigma2);
        }
        for (const auto& score : result.scores)
            require(std::fabs(score.zscore - expected.at(score.token)) < 1e-9,
                    "z-score deviates from the straight-line formula");

        // antisymmetry is exact
        auto swapped = fightin_words(matrix, "g1", "g0", alpha0);
        std::map<std::string, double> back;
        for (const auto& s : swapped.scores) back[s.token] = s.zscore;
        for (const auto& s : result.scores)
            require(s.zscore == -back.at(s.token), "swap must negate z exactly");
    }

    // identical rows give exact zeros
    std::vector<WeightTriple> same = {{"A", "x", 3.5}, {"A", "y", 1.25},
                                      {"B", "x", 3.5}, {"B", "y", 1.25}};
    auto matrix = WeightMatrix::from_triples(same, WeightKind::attention_sum);
    for (const auto& s : fightin_words(matrix, "A", "B", 0.02).scores)
        require(s.zscore == 0.0 && s.delta == 0.0, "identical rows must give exact zeros");
}

// ---------------------------------------------------------------------------
// criterion 5: cosine delta on a planted-marker corpus

void criterion_cosine_delta() {
    // fixed filler multiset per sample (order shuffled) + two class markers:
    // filler dimensions carry zero between-class variance, so the planted
    // markers decide every prediction
    const std::vector<std::string> filler = {"the", "and", "walk", "stone", "river",
                                             "cold", "light", "evening", "door", "voice",
                                             "wind"};
    const std::vector<std::string> markers = {"markeralpha", "markerbeta", "markergamma",
                                              "markerdelta"};
    SplitMix64 rng(505);
    std::vector<Sample> train, test;
    for (size_t c = 0; c < markers.size(); ++c) {
        std::string label = "class" + std::to_string(c);
        for (size_t s = 0; s < 600; ++s) { // 500 train + 100 test
            std::vector<std::string> words;
            for (const auto& w : filler) {
                words.push_back(w);
                words.push_back(w);
            }
            words.push_back(markers[c]);
            words.push_back(markers[c]);
            seeded_shuffle(words, rng);
            std::ostringstream text;
            for (size_t w = 0; w < words.size(); ++w) {
                if (w) text << ' ';
                text << words[w];
            }
            auto sample = make_sample(label + "-" + std::to_string(s), label, text.str());
            if (s < 500)
                train.push_back(std::move(sample));
            else
                test.push_back(std::move(sample));
        }
    }

    auto model = build_delta_profiles(train, 500);

    // z-profile invariant: per-dimension mean 0, sample std 1, within 1e-9
    const double n = static_cast<double>(model.profiles.size());
    for (size_t w = 0; w < model.mfw.size(); ++w) {
        if (model.stdev[w] == 0.0) continue;
        double mean = 0;
        for (const auto& p : model.profiles) mean += p.z[w];
        mean /= n;
        double ss = 0;
        for (const auto& p : model.profiles) ss += (p.z[w] - mean) * (p.z[w] - mean);
        const double sd = std::sqrt(ss / (n - 1));
        require(std::fabs(mean) < 1e-9, "profile z mean must be 0");
        require(std::fabs(sd - 1.0) < 1e-9, "profile z std must be 1");
    }

    DeltaPredictor predictor(model);
    for (const auto& sample : test)
        require(predictor.predict(sample).label == sample.class_label,
                "planted-marker sample misclassified: " + sample.sample_id);
}

// ---------------------------------------------------------------------------
// criterion 6: linear SVM on disjoint vocabularies

void criterion_svm() {
    SplitMix64 rng(606);
    std::vector<Sample> train;
    for (size_t c = 0; c < 3; ++c) {
        std::string label = "class" + std::to_string(c);
        for (size_t s = 0; s < 200; ++s) {
            std::ostringstream text;
            const char* prefixes[] = {"axo", "bel", "cor"};
            for (int w = 0; w < 15; ++w) {
                if (w) text << ' ';
                const size_t n = rng.next_below(50);
                text << prefixes[c] << "word" << static_cast<char>('a' + n / 26)
                     << static_cast<char>('a' + n % 26);
            }
            train.push_back(make_sample(label + "-" + std::to_string(s), label, text.str()));
        }
    }
    auto model = train_svm(train, 1e-4, 10, 77);
    SvmPredictor predictor(model);
    size_t correct = 0;
    for (const auto& sample : train)
        if (predictor.predict(sample).label == sample.class_label) ++correct;
    const double accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    require(accuracy >= 0.99, "train accuracy " + std::to_string(accuracy) + " below 0.99");

    auto again = train_svm(train, 1e-4, 10, 77);
    for (size_t c = 0; c < model.weights.size(); ++c) {
        require(model.bias[c] == again.bias[c], "bias must be bit-identical across runs");
        for (size_t w = 0; w < model.weights[c].size(); ++w)
            require(model.weights[c][w] == again.weights[c][w],
                    "weights must be bit-identical across runs");
    }
}

// ---------------------------------------------------------------------------
// criterion 7: bootstrap standard error

void criterion_bootstrap_se() {
    std::vector<PredictionRecord> preds;
    for (int i = 0; i < 1000; ++i) {
        PredictionRecord rec;
        rec.sample_id = "s" + std::to_string(i);
        rec.model_id = "m";
        rec.variant_id = "normal";
        rec.true_label = "A";
        rec.predicted_label = i < 700 ? "A" : "B"; // exact p = 0.7
        preds.push_back(std::move(rec));
    }
    auto report = accuracy_report(preds, 1000, 321);
    const double reference = std::sqrt(0.7 * 0.3 / 1000.0);
    require(std::fabs(report.overall.se - reference) <= 0.15 * reference,
            "bootstrap SE " + std::to_string(report.overall.se) + " outside 15% of " +
                std::to_string(reference));

    for (auto& rec : preds) rec.predicted_label = "A";
    auto perfect = accuracy_report(preds, 1000, 321);
    require(perfect.overall.se == 0.0, "all-correct input must give SE 0");
}

// ---------------------------------------------------------------------------
// criterion 8: random baseline calibration

void criterion_random_calibration() {
    auto calibrate = [](size_t n_classes) {
        std::vector<std::string> classes;
        for (size_t c = 0; c < n_classes; ++c)
            classes.push_back(std::string("class") + (c < 10 ? "0" : "") + std::to_string(c));
        std::map<std::string, size_t> counts;
        const size_t draws = 50000;
        for (size_t i = 0; i < draws; ++i) {
            Sample s = make_sample("draw-" + std::to_string(i), "?", "text");
            ++counts[random_predict(s, classes, 1234)];
        }
        const double expected = 1.0 / static_cast<double>(n_classes);
        for (const auto& label : classes) {
            const double freq =
                static_cast<double>(counts[label]) / static_cast<double>(draws);
            require(std::fabs(freq - expected) <= 0.005,
                    label + " frequency " + std::to_string(freq) + " deviates more than 0.5pp from " +
                        std::to_string(expected));
        }
    };
    calibrate(27);
    calibrate(5);
}

// ---------------------------------------------------------------------------
// criterion 9: embedding similarity oracle

void criterion_embedding_oracle() {
    SplitMix64 rng(909);
    const size_t dim = 6;
    auto random_vec = [&] {
        std::vector<double> v(dim);
        for (auto& x : v) x = rng.next_double() * 2 - 1;
        return v;
    };
    auto cos = [](const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0, na = 0, nb = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0 || nb == 0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    };

    // identical tables with full coverage must return exactly 1.0
    EmbeddingTable one;
    one.owner = "only";
    one.dim = dim;
    for (int w = 0; w < 8; ++w) {
        one.vectors["w" + std::to_string(w)] = random_vec();
        one.support["w" + std::to_string(w)] = 1;
    }
    std::vector<EmbeddingTable> single = {one};
    auto avg_single = build_average_table(single);
    auto identical = embedding_similarity_scores(single, avg_single, {}, {});
    require(identical.size() == 1 && identical[0].train_vs_average == 1.0,
            "identical tables must score exactly 1.0");

    // random tables against the brute-force loop
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::string> vocab;
        for (size_t w = 0; w < 4 + rng.next_below(12); ++w)
            vocab.push_back("w" + std::to_string(w));
        std::vector<EmbeddingTable> classes;
        for (size_t c = 0; c < 2 + rng.next_below(3); ++c) {
            EmbeddingTable t;
            t.owner = "class" + std::to_string(c);
            t.dim = dim;
            for (const auto& w : vocab)
                if (rng.next_below(3) != 0) {
                    t.vectors[w] = random_vec();
                    t.support[w] = 1;
                }
            if (t.vectors.empty()) {
                t.vectors[vocab[0]] = random_vec();
                t.support[vocab[0]] = 1;
            }
            classes.push_back(std::move(t));
        }
        auto average = build_average_table(classes);

        std::vector<EmbeddingTable> excerpts;
        std::map<std::string, std::string> owner_class;
        for (size_t e = 0; e < 6; ++e) {
            EmbeddingTable t;
            t.owner = "x" + std::to_string(e);
            t.dim = dim;
            for (const auto& w : vocab)
                if (rng.next_below(2) == 0) {
                    t.vectors[w] = random_vec();
                    t.support[w] = 1;
                }
            if (t.vectors.empty()) {
                t.vectors[vocab[0]] = random_vec();
                t.support[vocab[0]] = 1;
            }
            owner_class[t.owner] = classes[e % classes.size()].owner;
            excerpts.push_back(std::move(t));
        }

        auto scores = embedding_similarity_scores(classes, average, excerpts, owner_class);
        for (const auto& score : scores) {
            const EmbeddingTable* table = nullptr;
            for (const auto& t : classes)
                if (t.owner == score.class_label) table = &t;

            double sum = 0; // zero-fill over the training vocabulary
            for (const auto& [word, avg_vec] : average.vectors) {
                auto it = table->vectors.find(word);
                sum += it == table->vectors.end() ? 0.0 : cos(it->second, avg_vec);
            }
            require(std::fabs(score.train_vs_average -
                              sum / static_cast<double>(average.vectors.size())) < 1e-9,
                    "train_vs_average deviates from the per-word loop");

            double total = 0;
            size_t count = 0;
            for (const auto& excerpt : excerpts) {
                if (owner_class.at(excerpt.owner) != score.class_label) continue;
                double s = 0;
                for (const auto& [word, vec] : excerpt.vectors) {
                    auto it = table->vectors.find(word);
                    s += it == table->vectors.end() ? 0.0 : cos(vec, it->second);
                }
                total += s / static_cast<double>(excerpt.vectors.size());
                ++count;
            }
            const double expect = count ? total / static_cast<double>(count) : 0.0;
            require(std::fabs(score.test_vs_train - expect) < 1e-9,
                    "test_vs_train deviates from the per-excerpt loop");
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 10: pearson

void criterion_pearson() {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v + 1);
    auto line = pearson(x, y);
    require(line.r == 1.0, "y = 2x + 1 must give r = 1");

    SplitMix64 rng(1010);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 5 + rng.next_below(60);
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = rng.next_double() * 20 - 10;
            b[i] = 0.4 * a[i] + rng.next_double() * 8 - 4;
        }
        auto result = pearson(a, b);
        // direct-formula reference on raw moments
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (size_t i = 0; i < n; ++i) {
            sx += a[i];
            sy += b[i];
            sxx += a[i] * a[i];
            syy += b[i] * b[i];
            sxy += a[i] * b[i];
        }
        const double nn = static_cast<double>(n);
        const double reference = (nn * sxy - sx * sy) /
                                 std::sqrt((nn * sxx - sx * sx) * (nn * syy - sy * sy));
        require(std::fabs(result.r - reference) < 1e-9, "r deviates from the direct formula");
        require(result.p >= 0.0 && result.p <= 1.0, "p out of range");
    }
}

// ---------------------------------------------------------------------------
// criterion 11: end-to-end determinism on the bundled toy corpus

std::map<fs::path, std::string> snapshot(const fs::path& root) {
    std::map<fs::path, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), root)] = read_file(entry.path());
    return files;
}

void criterion_end_to_end_determinism() {
    const fs::path config_path = g_toy_dir / "config.json";
    require(fs::exists(config_path), "bundled toy corpus config missing: " + config_path.string());
    const fs::path work = fs::temp_directory_path() / "stylus_acceptance_run";
    fs::remove_all(work);
    fs::create_directories(work);

    ExperimentConfig config = ExperimentConfig::load(config_path);
    config.output_dir = work / "run1";
    require(run_pipeline(config) == 0, "first pipeline run failed");
    config.output_dir = work / "run2";
    require(run_pipeline(config) == 0, "second pipeline run failed");

    auto a = snapshot(work / "run1");
    auto b = snapshot(work / "run2");
    require(a.size() == b.size(), "bundles differ in file count");
    for (const auto& [path, content] : a) {
        auto it = b.find(path);
        require(it != b.end(), "missing from second bundle: " + path.string());
        require(it->second == content, "bundle file differs: " + path.string());
    }
    fs::remove_all(work);
}

// ---------------------------------------------------------------------------
// criterion 12: corpus-scale statistical check (optional)

void criterion_corpus_scale() {
    const char* authorship_env = std::getenv("STYLUS_AUTHORSHIP_DESCRIPTOR");
    const char* genre_env = std::getenv("STYLUS_GENRE_DESCRIPTOR");
    if (!authorship_env && !genre_env)
        throw skip_criterion(
            "set STYLUS_AUTHORSHIP_DESCRIPTOR / STYLUS_GENRE_DESCRIPTOR to a user-assembled "
            "corpus descriptor to enable this check");

    auto evaluate = [](const fs::path& descriptor, Task task, double random_rate,
                       double multiple) {
        auto novels = load_corpus_descriptor(descriptor);
        auto corpus = build_corpus(task, novels);
        auto split = assign_splits(corpus.manifest, corpus.samples,
                                   SplitSpec::defaults_for(task, 1869));
        std::vector<Sample> train, test;
        for (const auto& s : corpus.samples) {
            switch (split.tag_of(s.sample_id)) {
                case SplitTag::train: train.push_back(s); break;
                case SplitTag::test: test.push_back(s); break;
                default: break;
            }
        }
        auto delta = build_delta_profiles(train, 500);
        DeltaPredictor delta_predictor(delta);
        auto svm = train_svm(train, 1e-4, 10, 1869);
        SvmPredictor svm_predictor(svm);
        size_t delta_correct = 0, svm_correct = 0;
        for (const auto& s : test) {
            delta_correct += delta_predictor.predict(s).label == s.class_label;
            svm_correct += svm_predictor.predict(s).label == s.class_label;
        }
        const double n = static_cast<double>(test.size());
        const double delta_acc = static_cast<double>(delta_correct) / n;
        const double svm_acc = static_cast<double>(svm_correct) / n;
        std::cout << "    " << to_string(task) << ": cosine delta " << delta_acc << ", svm "
                  << svm_acc << ", floor " << multiple * random_rate << "\n";
        require(delta_acc >= multiple * random_rate,
                std::string(to_string(task)) + " cosine delta below the random-multiple floor");
        require(svm_acc >= multiple * random_rate,
                std::string(to_string(task)) + " svm below the random-multiple floor");
    };

    if (authorship_env) evaluate(authorship_env, Task::authorship, 1.0 / 27.0, 3.0);
    if (genre_env) evaluate(genre_env, Task::genre, 1.0 / 5.0, 2.0);
}

// ---------------------------------------------------------------------------

struct Criterion {
    int number;
    const char* name;
    double time_limit_s;
    std::function<void()> body;
};

} // namespace

int main(int argc, char** argv) {
    g_toy_dir = argc > 1 ? fs::path(argv[1]) : fs::path("data/toy");

    const std::vector<Criterion> criteria = {
        {1, "golden variant suite", 1.0, criterion_golden_variants},
        {2, "stop-word lexicon equality", 1.0, criterion_lexicon_equality},
        {3, "split arithmetic", 5.0, criterion_split_arithmetic},
        {4, "weighted log-odds oracle", 5.0, criterion_fightin_oracle},
        {5, "cosine delta planted corpus", 10.0, criterion_cosine_delta},
        {6, "svm disjoint-vocabulary corpus", 30.0, criterion_svm},
        {7, "bootstrap standard error", 10.0, criterion_bootstrap_se},
        {8, "random baseline calibration", 5.0, criterion_random_calibration},
        {9, "embedding similarity oracle", 10.0, criterion_embedding_oracle},
        {10, "pearson correlation", 5.0, criterion_pearson},
        {11, "end-to-end determinism", 120.0, criterion_end_to_end_determinism},
        {12, "corpus-scale statistical check", 3600.0, criterion_corpus_scale},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            criterion.body();
        } catch (const skip_criterion& s) {
            verdict = "SKIP";
            detail = s.what();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failures;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (verdict == "PASS" && elapsed > criterion.time_limit_s) {
            verdict = "FAIL";
            detail = "exceeded time budget of " + std::to_string(criterion.time_limit_s) + "s";
            ++failures;
        }
        std::printf("[%s] criterion %2d: %s (%.2fs%s%s)\n", verdict.c_str(), criterion.number,
                    criterion.name, elapsed, detail.empty() ? "" : " - ",
                    detail.c_str());
    }
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
