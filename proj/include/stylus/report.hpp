#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "stylus/analysis.hpp"

namespace stylus {

// CSV and Markdown renderers for the analysis results. Numeric formatting is
// fixed-precision and locale-independent so report bundles are byte-stable.

std::string format_double(double value);

std::string accuracy_csv(const AccuracyReport& report);
std::string accuracy_markdown(const AccuracyReport& report, std::string_view title);

std::string confusion_csv(const ConfusionMatrix& matrix);         // row-normalized percent view
std::string confusion_counts_csv(const ConfusionMatrix& matrix);  // raw counts + OUT_OF_SET column

std::string scapegoat_csv(const ScapegoatShares& shares);

std::string style_metrics_csv(std::span<const ClassStyleMetrics> metrics);

std::string fightin_csv(const FightinWordsResult& result,
                        std::string_view standardization_note = "none");

std::string embedding_similarity_csv(std::span<const EmbeddingSimilarityScores> scores);

std::string pearson_markdown(const PearsonResult& result, std::string_view label_x,
                             std::string_view label_y);

// Minimal static SVG: vertical bars with optional error whiskers.
std::string svg_bar_chart(std::span<const std::string> labels, std::span<const double> values,
                          std::span<const double> errors, std::string_view title);

// Scatter plot of (x, y) points.
std::string svg_scatter(std::span<const double> x, std::span<const double> y,
                        std::string_view title);

} // namespace stylus
