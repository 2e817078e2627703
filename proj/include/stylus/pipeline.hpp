#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stylus/corpus.hpp"
#include "stylus/splitter.hpp"

namespace stylus {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct AnalysisToggles {
    bool accuracy = true;
    bool confusion = true;
    bool scapegoat = true;
    bool style_metrics = false;
    bool svg = false;
    int bootstrap_iters = 1000;
    size_t scapegoat_top_n = 10;
    size_t style_sample_cap = SIZE_MAX; // equal-exposure cap for style metrics
};

// One declarative file drives the whole experiment grid; CLI flags override.
struct ExperimentConfig {
    Task task = Task::authorship;
    std::filesystem::path descriptor; // corpus descriptor TSV
    SplitSpec split;                  // quotas; seed derived from `seed` unless set
    bool split_seed_explicit = false;
    std::vector<std::string> variants = {"normal"};
    std::vector<std::string> models = {"cosine_delta"}; // builtin ids or "external:<path>"
    AnalysisToggles analysis;
    std::filesystem::path output_dir = "stylus_out";
    uint64_t seed = 0;
    size_t jobs = 1;

    size_t delta_mfw = 500;
    double svm_reg = 1e-4;
    int svm_epochs = 10;

    std::optional<std::filesystem::path> propn_file;
    bool heuristic_propn = false;

    uint64_t config_hash = 0; // FNV-1a over the config file bytes

    static ExperimentConfig load(const std::filesystem::path& file);

    // Fail-fast checks: referenced paths exist, variant list non-empty,
    // proper-noun source present when a variant needs one.
    void validate() const;
};

// Builds the full report bundle under config.output_dir:
//   RUNINFO, manifest.tsv, samples.tsv, split.tsv, variants/, models/,
//   predictions/, analysis/, report.md
// Returns 0 on success; on failure writes a FAILED marker, leaves partial
// outputs in place, and returns nonzero after printing one structured error.
int run_pipeline(const ExperimentConfig& config);

// Re-runs the analysis and report stages of an existing bundle using the
// seeds recorded in its RUNINFO; output is byte-identical to the original.
int reanalyze_bundle(const std::filesystem::path& bundle_dir);

} // namespace stylus
