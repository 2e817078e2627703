#include "stylus/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

namespace stylus {

namespace {

using json = nlohmann::json;

std::vector<std::string> sorted_classes(std::span<const Sample> samples) {
    std::vector<std::string> classes;
    for (const auto& s : samples)
        if (std::find(classes.begin(), classes.end(), s.class_label) == classes.end())
            classes.push_back(s.class_label);
    std::sort(classes.begin(), classes.end());
    return classes;
}

json load_model_json(const std::filesystem::path& path, std::string_view expected_format) {
    json doc = json::parse(read_file(path));
    if (doc.value("format", "") != expected_format)
        throw Error(ErrorCode::ConfigError,
                    path.string() + ": expected format '" + std::string(expected_format) + "'");
    return doc;
}

} // namespace

DeltaModel build_delta_profiles(std::span<const Sample> train, size_t k) {
    if (k < 1) throw Error(ErrorCode::ConfigError, "mfw size must be >= 1");
    auto classes = sorted_classes(train);
    if (classes.empty()) throw Error(ErrorCode::EmptyClass, "no training samples");

    std::unordered_map<std::string, size_t> class_index;
    for (size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = c;

    // per-class and corpus-wide counts
    std::vector<std::unordered_map<std::string, size_t>> counts(classes.size());
    std::vector<size_t> totals(classes.size(), 0);
    std::map<std::string, size_t> corpus_counts; // ordered for deterministic ties
    for (const auto& sample : train) {
        size_t c = class_index.at(sample.class_label);
        for (auto& word : word_tokens(sample.text)) {
            ++corpus_counts[word];
            ++counts[c][word];
            ++totals[c];
        }
    }
    for (size_t c = 0; c < classes.size(); ++c)
        if (totals[c] == 0) throw Error(ErrorCode::EmptyClass, classes[c]);

    // top-k by corpus frequency, ties broken lexicographically
    std::vector<std::pair<std::string, size_t>> ranked(corpus_counts.begin(), corpus_counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    const size_t dims = std::min(k, ranked.size());

    DeltaModel model;
    model.mfw.reserve(dims);
    for (size_t i = 0; i < dims; ++i) model.mfw.push_back(ranked[i].first);

    // relative frequencies per class, then z-score each dimension across classes
    std::vector<std::vector<double>> freq(classes.size(), std::vector<double>(dims, 0.0));
    for (size_t c = 0; c < classes.size(); ++c)
        for (size_t w = 0; w < dims; ++w) {
            auto it = counts[c].find(model.mfw[w]);
            if (it != counts[c].end())
                freq[c][w] = static_cast<double>(it->second) / static_cast<double>(totals[c]);
        }

    model.mean.assign(dims, 0.0);
    model.stdev.assign(dims, 0.0);
    const double n = static_cast<double>(classes.size());
    for (size_t w = 0; w < dims; ++w) {
        double sum = 0;
        for (size_t c = 0; c < classes.size(); ++c) sum += freq[c][w];
        model.mean[w] = sum / n;
        double ss = 0;
        for (size_t c = 0; c < classes.size(); ++c) {
            double d = freq[c][w] - model.mean[w];
            ss += d * d;
        }
        model.stdev[w] = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    }

    model.profiles.reserve(classes.size());
    for (size_t c = 0; c < classes.size(); ++c) {
        ClassProfile profile;
        profile.class_label = classes[c];
        profile.z.assign(dims, 0.0);
        for (size_t w = 0; w < dims; ++w)
            if (model.stdev[w] > 0.0) profile.z[w] = (freq[c][w] - model.mean[w]) / model.stdev[w];
        model.profiles.push_back(std::move(profile));
    }
    return model;
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

DeltaPredictor::DeltaPredictor(const DeltaModel& model) : model_(model) {
    for (size_t w = 0; w < model.mfw.size(); ++w) mfw_index_[model.mfw[w]] = w;
}

Prediction DeltaPredictor::predict(const Sample& sample) const {
    const DeltaModel& model = model_;
    if (model.profiles.empty()) throw Error(ErrorCode::EmptyClass, "model has no profiles");

    std::vector<double> freq(model.mfw.size(), 0.0);
    size_t total = 0;
    size_t hits = 0;
    for (auto& word : word_tokens(sample.text)) {
        ++total;
        auto it = mfw_index_.find(word);
        if (it != mfw_index_.end()) {
            freq[it->second] += 1.0;
            ++hits;
        }
    }
    if (hits == 0) return {model.profiles.front().class_label, true};

    std::vector<double> z(freq.size(), 0.0);
    for (size_t w = 0; w < freq.size(); ++w) {
        freq[w] /= static_cast<double>(total);
        if (model.stdev[w] > 0.0) z[w] = (freq[w] - model.mean[w]) / model.stdev[w];
    }

    const ClassProfile* best = nullptr;
    double best_score = 0;
    for (const auto& profile : model.profiles) { // sorted by label; ties keep the first
        double score = cosine(z, profile.z);
        if (!best || score > best_score) {
            best = &profile;
            best_score = score;
        }
    }
    return {best->class_label, false};
}

Prediction delta_predict(const Sample& sample, const DeltaModel& model) {
    return DeltaPredictor(model).predict(sample);
}

void DeltaModel::save(const std::filesystem::path& path) const {
    json doc;
    doc["format"] = "stylus.delta.v1";
    doc["mfw"] = mfw;
    doc["mean"] = mean;
    doc["stdev"] = stdev;
    json profs = json::array();
    for (const auto& p : profiles) profs.push_back({{"class", p.class_label}, {"z", p.z}});
    doc["profiles"] = std::move(profs);
    write_file_atomic(path, doc.dump(1, '\t') + "\n");
}

DeltaModel DeltaModel::load(const std::filesystem::path& path) {
    json doc = load_model_json(path, "stylus.delta.v1");
    DeltaModel model;
    model.mfw = doc.at("mfw").get<std::vector<std::string>>();
    model.mean = doc.at("mean").get<std::vector<double>>();
    model.stdev = doc.at("stdev").get<std::vector<double>>();
    for (const auto& p : doc.at("profiles")) {
        ClassProfile profile;
        profile.class_label = p.at("class").get<std::string>();
        profile.z = p.at("z").get<std::vector<double>>();
        model.profiles.push_back(std::move(profile));
    }
    return model;
}

namespace {

struct TfidfDoc {
    std::vector<std::pair<size_t, double>> features; // (column, value), L2-normalized
    size_t class_index = 0;
};

std::vector<std::pair<size_t, double>> vectorize(const std::string& text,
                                                 const std::unordered_map<std::string, size_t>& vocab,
                                                 std::span<const double> idf) {
    std::map<size_t, double> tf; // ordered columns
    for (auto& word : word_tokens(text)) {
        auto it = vocab.find(word);
        if (it != vocab.end()) tf[it->second] += 1.0;
    }
    std::vector<std::pair<size_t, double>> features(tf.begin(), tf.end());
    double norm = 0;
    for (auto& [col, value] : features) {
        value *= idf[col];
        norm += value * value;
    }
    if (norm > 0) {
        norm = std::sqrt(norm);
        for (auto& [col, value] : features) value /= norm;
    }
    return features;
}

} // namespace

TfidfModel train_svm(std::span<const Sample> train, double reg, int epochs, uint64_t seed) {
    auto classes = sorted_classes(train);
    if (classes.size() < 2) throw Error(ErrorCode::SingleClass, "training needs >= 2 classes");
    if (reg <= 0) throw Error(ErrorCode::ConfigError, "regularization must be positive");

    TfidfModel model;
    model.classes = classes;

    // vocabulary and document frequencies
    std::map<std::string, size_t> df;
    for (const auto& sample : train) {
        auto words = word_tokens(sample.text);
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
        for (auto& w : words) ++df[w];
    }
    model.vocabulary.reserve(df.size());
    model.idf.reserve(df.size());
    const double n_docs = static_cast<double>(train.size());
    std::unordered_map<std::string, size_t> vocab;
    for (const auto& [word, count] : df) {
        vocab[word] = model.vocabulary.size();
        model.vocabulary.push_back(word);
        model.idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(count))) + 1.0);
    }

    std::unordered_map<std::string, size_t> class_index;
    for (size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = c;

    std::vector<TfidfDoc> docs(train.size());
    for (size_t i = 0; i < train.size(); ++i) {
        docs[i].features = vectorize(train[i].text, vocab, model.idf);
        docs[i].class_index = class_index.at(train[i].class_label);
    }

    model.weights.assign(classes.size(), std::vector<double>(model.vocabulary.size(), 0.0));
    model.bias.assign(classes.size(), 0.0);

    // Pegasos-style subgradient descent, one independent stream per class.
    // The intercept rides along as an always-on regularized feature, and the
    // weight vector is kept as scale * v so the shrink step is O(1).
    const size_t intercept = model.vocabulary.size();
    for (size_t c = 0; c < classes.size(); ++c) {
        std::vector<double> v(model.vocabulary.size() + 1, 0.0);
        double scale = 1.0;
        SplitMix64 rng(derive_seed(seed, c));
        std::vector<size_t> order(docs.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        size_t t = 0;
        for (int epoch = 0; epoch < epochs; ++epoch) {
            seeded_shuffle(order, rng);
            for (size_t idx : order) {
                const TfidfDoc& doc = docs[idx];
                const double y = doc.class_index == c ? 1.0 : -1.0;
                const double eta = 1.0 / (reg * static_cast<double>(++t));
                double score = v[intercept];
                for (const auto& [col, value] : doc.features) score += v[col] * value;
                score *= scale;
                scale *= 1.0 - eta * reg; // == 1 - 1/t; exactly 0 at t == 1
                if (scale <= 0.0) {
                    std::fill(v.begin(), v.end(), 0.0);
                    scale = 1.0;
                }
                if (y * score < 1.0) {
                    for (const auto& [col, value] : doc.features) v[col] += eta * y * value / scale;
                    v[intercept] += eta * y / scale;
                }
                if (scale < 1e-9) { // fold the scale in before it underflows
                    for (double& w : v) w *= scale;
                    scale = 1.0;
                }
            }
        }
        for (size_t w = 0; w < intercept; ++w) model.weights[c][w] = v[w] * scale;
        model.bias[c] = v[intercept] * scale;
    }
    return model;
}

SvmPredictor::SvmPredictor(const TfidfModel& model) : model_(model) {
    for (size_t i = 0; i < model.vocabulary.size(); ++i) vocab_index_[model.vocabulary[i]] = i;
}

Prediction SvmPredictor::predict(const Sample& sample) const {
    const TfidfModel& model = model_;
    auto features = vectorize(sample.text, vocab_index_, model.idf);
    if (features.empty()) return {model.classes.front(), true};
    size_t best = 0;
    double best_score = 0;
    for (size_t c = 0; c < model.classes.size(); ++c) { // classes sorted; ties keep the first
        double score = model.bias[c];
        for (const auto& [col, value] : features) score += model.weights[c][col] * value;
        if (c == 0 || score > best_score) {
            best = c;
            best_score = score;
        }
    }
    return {model.classes[best], false};
}

Prediction svm_predict(const Sample& sample, const TfidfModel& model) {
    return SvmPredictor(model).predict(sample);
}

void TfidfModel::save(const std::filesystem::path& path) const {
    json doc;
    doc["format"] = "stylus.svm_tfidf.v1";
    doc["vocabulary"] = vocabulary;
    doc["idf"] = idf;
    doc["classes"] = classes;
    doc["weights"] = weights;
    doc["bias"] = bias;
    write_file_atomic(path, doc.dump(1, '\t') + "\n");
}

TfidfModel TfidfModel::load(const std::filesystem::path& path) {
    json doc = load_model_json(path, "stylus.svm_tfidf.v1");
    TfidfModel model;
    model.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    model.idf = doc.at("idf").get<std::vector<double>>();
    model.classes = doc.at("classes").get<std::vector<std::string>>();
    model.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
    model.bias = doc.at("bias").get<std::vector<double>>();
    return model;
}

std::string random_predict(const Sample& sample, std::span<const std::string> classes,
                           uint64_t seed) {
    if (classes.empty()) throw Error(ErrorCode::EmptyClass, "no classes to draw from");
    std::vector<std::string> sorted(classes.begin(), classes.end());
    std::sort(sorted.begin(), sorted.end());
    SplitMix64 rng(derive_seed(seed, sample.sample_id));
    return sorted[rng.next_below(sorted.size())];
}

void save_predictions(std::span<const PredictionRecord> records,
                      const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& r : records) {
        const std::string& predicted =
            r.predicted_label == kOutOfSet && !r.raw_predicted.empty() ? r.raw_predicted
                                                                       : r.predicted_label;
        out << r.sample_id << '\t' << r.model_id << '\t' << r.variant_id << '\t' << predicted
            << '\t' << r.true_label << '\t' << (r.from_withheld_novel ? 1 : 0) << "\n";
    }
    write_file_atomic(path, out.str());
}

} // namespace stylus
