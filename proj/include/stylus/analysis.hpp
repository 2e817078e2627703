#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stylus/classify.hpp"
#include "stylus/corpus.hpp"
#include "stylus/probe_io.hpp"

namespace stylus {

// ---------------------------------------------------------------------------
// Accuracy with bootstrap standard errors

struct AccuracyFigure {
    double value = 0;        // exact accuracy, correct / n
    double se = 0;           // std dev of accuracy over seeded resamples
    bool se_degenerate = false; // bootstrap_iters < 2; se reported as 0
    size_t n = 0;
    size_t correct = 0;
};

struct AccuracyReport {
    AccuracyFigure overall;
    std::map<std::string, AccuracyFigure> by_class;    // keyed by true label
    std::map<std::string, AccuracyFigure> by_withheld; // "in_training" / "withheld"
};

inline constexpr int kDefaultBootstrapIters = 1000;

// Each figure is bootstrapped over its own record subset, resampled with
// replacement at the prediction-record level. Per-iteration seeds are derived
// from (seed, figure, iteration) so the SE is independent of thread count.
AccuracyReport accuracy_report(std::span<const PredictionRecord> preds,
                               int bootstrap_iters = kDefaultBootstrapIters, uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Confusion matrix

struct ConfusionMatrix {
    std::vector<std::string> classes;             // sorted label space
    std::vector<std::vector<size_t>> counts;      // rows = true, cols = predicted
    std::vector<size_t> out_of_set;               // per-row OUT_OF_SET tally (side column)
    std::vector<std::vector<double>> row_percent; // normalized over in-set columns
};

ConfusionMatrix confusion_matrix(std::span<const PredictionRecord> preds);

// ---------------------------------------------------------------------------
// Scapegoat shares

struct ScapegoatShares {
    std::vector<std::string> ranked_labels;  // predicted labels by misattribution count
    std::vector<double> cumulative_percent;  // share claimed by top 1..n
    size_t total_errors = 0;
};

ScapegoatShares scapegoat_shares(std::span<const PredictionRecord> preds, size_t top_n);

// ---------------------------------------------------------------------------
// Vocabulary size and uniqueness

struct ClassStyleMetrics {
    std::string class_label;
    size_t vocab_size = 0;  // distinct lowercased alphabetic types
    double uniqueness = 0;  // mean of 100 / class-df over the class's types
    std::string metric_version;
};

inline constexpr std::string_view kUniquenessMetricVersion = "inverse-class-df-v1";

// Each class is measured over a seeded sample of min(sample_cap, smallest
// class size) sentences so every class gets equal exposure.
std::vector<ClassStyleMetrics> class_style_metrics(std::span<const Sample> train,
                                                   size_t sample_cap, uint64_t seed);

// ---------------------------------------------------------------------------
// Pearson correlation

struct PearsonResult {
    double r = 0;
    double p = 1; // two-sided, via the t statistic and the regularized incomplete beta
    size_t n = 0;
};

PearsonResult pearson(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Fightin' words over weight matrices

enum class PriorKind { uniform, informative };

const char* to_string(PriorKind prior);

struct TokenScore {
    std::string token;
    double zscore = 0;
    double delta = 0;  // log-odds difference
    double rate_i = 0; // weight share within group i
    double rate_j = 0;
};

struct FightinWordsResult {
    std::vector<TokenScore> scores; // ranked by zscore descending
    double alpha0 = 0;
    PriorKind prior = PriorKind::uniform;
    std::string group_i;
    std::string group_j;
};

// Default Dirichlet mass: 0.01 per token type.
double default_alpha0(const WeightMatrix& matrix);

// Log-odds-ratio with a Dirichlet prior, generalized to real-valued
// nonnegative weights. With y the per-token weights, n the row sums, and
// a_w the per-token prior mass:
//   delta_w = ln((y_i+a_w)/(n_i+alpha0-y_i-a_w)) - ln((y_j+a_w)/(n_j+alpha0-y_j-a_w))
//   var_w   = 1/(y_i+a_w) + 1/(y_j+a_w)
//   z_w     = delta_w / sqrt(var_w)
FightinWordsResult fightin_words(const WeightMatrix& matrix, const std::string& group_i,
                                 const std::string& group_j, double alpha0,
                                 PriorKind prior = PriorKind::uniform);

// target vs. the elementwise sum of all other rows.
FightinWordsResult one_vs_rest_fightin(const WeightMatrix& matrix, const std::string& target_group,
                                       double alpha0, PriorKind prior = PriorKind::uniform);

// ---------------------------------------------------------------------------
// Embedding similarity probes

struct EmbeddingSimilarityScores {
    std::string class_label;
    double train_vs_average = 0; // mean cos over the training vocabulary, zero-filled
    double test_vs_train = 0;    // per-excerpt mean cos vs. class table, averaged over excerpts
};

// Per word, the unweighted mean over the classes that contain it.
EmbeddingTable build_average_table(std::span<const EmbeddingTable> class_tables);

// test_excerpts are per-sample tables (owner = sample id); sample_to_class
// maps each excerpt to its class.
std::vector<EmbeddingSimilarityScores> embedding_similarity_scores(
    std::span<const EmbeddingTable> class_tables, const EmbeddingTable& average_table,
    std::span<const EmbeddingTable> test_excerpts,
    const std::map<std::string, std::string>& sample_to_class);

} // namespace stylus
