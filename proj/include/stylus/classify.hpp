#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stylus/corpus.hpp"

namespace stylus {

// Per-class z-scored most-frequent-word vector. The feature basis (mfw) and
// the fit statistics live on the model; profiles share them.
struct ClassProfile {
    std::string class_label;
    std::vector<double> z;
};

struct DeltaModel {
    std::vector<std::string> mfw;   // top-k corpus words, frequency then lexicographic order
    std::vector<double> mean;       // per-dimension fit mean across class profiles
    std::vector<double> stdev;      // per-dimension sample standard deviation
    std::vector<ClassProfile> profiles; // sorted by class_label

    void save(const std::filesystem::path& path) const;
    static DeltaModel load(const std::filesystem::path& path);
};

inline constexpr size_t kDefaultMfw = 500;

DeltaModel build_delta_profiles(std::span<const Sample> train, size_t k = kDefaultMfw);

struct Prediction {
    std::string label;
    bool degenerate = false; // no usable features; lexicographically first class returned
};

Prediction delta_predict(const Sample& sample, const DeltaModel& model);

// Reusable prediction context; builds the feature index once.
class DeltaPredictor {
public:
    explicit DeltaPredictor(const DeltaModel& model);
    Prediction predict(const Sample& sample) const;

private:
    const DeltaModel& model_;
    std::unordered_map<std::string, size_t> mfw_index_;
};

// One-vs-rest linear classifiers over TF-IDF unigram vectors, trained by
// seeded stochastic subgradient descent on L2-regularized hinge loss.
struct TfidfModel {
    std::vector<std::string> vocabulary; // sorted; position = column
    std::vector<double> idf;             // ln((1+N)/(1+df)) + 1
    std::vector<std::string> classes;    // sorted
    std::vector<std::vector<double>> weights; // per class
    std::vector<double> bias;

    void save(const std::filesystem::path& path) const;
    static TfidfModel load(const std::filesystem::path& path);
};

inline constexpr double kDefaultSvmReg = 1e-4;
inline constexpr int kDefaultSvmEpochs = 10;

TfidfModel train_svm(std::span<const Sample> train, double reg = kDefaultSvmReg,
                     int epochs = kDefaultSvmEpochs, uint64_t seed = 0);

Prediction svm_predict(const Sample& sample, const TfidfModel& model);

class SvmPredictor {
public:
    explicit SvmPredictor(const TfidfModel& model);
    Prediction predict(const Sample& sample) const;

private:
    const TfidfModel& model_;
    std::unordered_map<std::string, size_t> vocab_index_;
};

// Uniform seeded draw over the class set, stateless per sample.
std::string random_predict(const Sample& sample, std::span<const std::string> classes,
                           uint64_t seed);

// Sentinel predicted_label for external predictions outside the task's class
// set; the original string is retained alongside.
inline constexpr std::string_view kOutOfSet = "OUT_OF_SET";

struct PredictionRecord {
    std::string sample_id;
    std::string model_id;
    std::string variant_id;
    std::string predicted_label;
    std::string true_label;
    std::string raw_predicted; // original string when predicted_label == OUT_OF_SET
    bool from_withheld_novel = false;
};

// "sample_id<TAB>model_id<TAB>variant_id<TAB>predicted<TAB>true<TAB>withheld"
void save_predictions(std::span<const PredictionRecord> records,
                      const std::filesystem::path& path);

} // namespace stylus
