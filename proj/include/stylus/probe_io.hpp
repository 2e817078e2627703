#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stylus/classify.hpp"
#include "stylus/corpus.hpp"

namespace stylus {

// ---------------------------------------------------------------------------
// Fine-tune record emission

enum class FinetuneStyle { t5_mask, causal_suffix };

const char* to_string(FinetuneStyle style);
FinetuneStyle parse_finetune_style(std::string_view name);

struct FinetuneRecord {
    std::string sample_id;
    std::string input_text;
    std::string output_text;
};

// t5_mask:       in  "AUTHOR: <extra_id_0> | {text}"
//                out "AUTHOR: {label} | {text}"
// causal_suffix: in  "{text} | AUTHOR: "
//                out "{text} | AUTHOR: {label}"
// The field name is GENRE for the genre task.
std::vector<FinetuneRecord> emit_finetune_records(std::span<const Sample> samples, Task task,
                                                  FinetuneStyle style);

struct ParsedFinetune {
    std::string label;
    std::string text;
};

// Inverse of the output_text format; emission is loss-free.
ParsedFinetune parse_finetune_output(std::string_view output_text, Task task,
                                     FinetuneStyle style);

// JSON-lines {"sample_id":..., "input":..., "output":...}
void save_finetune_records(std::span<const FinetuneRecord> records,
                           const std::filesystem::path& path);
std::vector<FinetuneRecord> load_finetune_records(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// External prediction ingestion

// Reads the predictions line format. Labels outside `classes` become
// OUT_OF_SET with the original string retained. When known_sample_ids is
// given, unknown ids are rejected.
std::vector<PredictionRecord> ingest_predictions(
    const std::filesystem::path& path, const std::set<std::string>& classes,
    const std::set<std::string>* known_sample_ids = nullptr);

// ---------------------------------------------------------------------------
// Generation-to-label matching

struct GenerationMatch {
    bool full = false;    // case- and punctuation-insensitive containment of the full name
    bool surname = false; // last name only; reported separately, never conflated
};

GenerationMatch match_generation(std::string_view generation, std::string_view target_label);

// ---------------------------------------------------------------------------
// Weight matrices (attention / attribution / count triples)

enum class WeightKind { count, attention_sum, attribution_sum };

const char* to_string(WeightKind kind);
WeightKind parse_weight_kind(std::string_view name);

struct WeightTriple {
    std::string group;
    std::string token_type;
    double weight = 0;
};

// Dense nonnegative matrix of per-group token weights. Groups and token
// types are stored sorted so equal inputs produce identical files.
class WeightMatrix {
public:
    WeightMatrix() = default;

    // clamp_negatives applies only to attribution weights; attention and
    // count weights reject negatives outright.
    static WeightMatrix from_triples(std::span<const WeightTriple> triples, WeightKind kind,
                                     bool clamp_negatives = false,
                                     std::vector<std::string>* warnings = nullptr);

    const std::vector<std::string>& groups() const { return groups_; }
    const std::vector<std::string>& token_types() const { return token_types_; }
    WeightKind kind() const { return kind_; }

    size_t group_index(const std::string& group) const; // throws UnknownGroup
    double at(size_t group, size_t token) const { return weights_[group * token_types_.size() + token]; }
    double& at(size_t group, size_t token) { return weights_[group * token_types_.size() + token]; }
    double row_sum(size_t group) const;

    bool operator==(const WeightMatrix& other) const = default;

private:
    std::vector<std::string> groups_;
    std::vector<std::string> token_types_;
    std::vector<double> weights_; // row-major, groups x token_types
    WeightKind kind_ = WeightKind::count;
};

// "group<TAB>token<TAB>weight" triples; zeros for absent pairs.
WeightMatrix ingest_weight_matrix(const std::filesystem::path& path, WeightKind kind,
                                  bool clamp_negatives = false,
                                  std::vector<std::string>* warnings = nullptr);
void save_weight_matrix(const WeightMatrix& matrix, const std::filesystem::path& path);

// Divides each row by its evaluation multiplicity (e.g. incorrect-answer
// rows are evaluated 26x or 4x more often than correct rows). Groups absent
// from the map keep multiplicity 1; map keys must name existing groups.
WeightMatrix standardize_groups(const WeightMatrix& matrix,
                                const std::map<std::string, int>& group_multiplicity);

// Alternative row standardizations. "mass" rescales each row to sum 1;
// "unit_variance" rescales each row to unit standard deviation (no centering,
// so weights stay nonnegative). Reports record which was applied.
enum class RowNormalization { none, mass, unit_variance };

const char* to_string(RowNormalization mode);
RowNormalization parse_row_normalization(std::string_view name);

WeightMatrix normalize_rows(const WeightMatrix& matrix, RowNormalization mode);

// ---------------------------------------------------------------------------
// Embedding tables

inline constexpr std::string_view kAverageOwner = "AVERAGE";

// Per-owner word -> mean contextual embedding. Owner is a class label, the
// AVERAGE sentinel, or a sample id for per-excerpt test tables.
struct EmbeddingTable {
    std::string owner;
    size_t dim = 0;
    std::map<std::string, std::vector<double>> vectors;
    std::map<std::string, long long> support; // record counts per word

    const std::vector<double>* find(const std::string& word) const;
};

// JSON-lines {"owner":..., "word":..., "vector":[...], "support": n?}.
// Duplicate (owner, word) records are averaged (support-weighted) with
// support counts accumulated. Returns one table per owner, sorted by owner.
std::vector<EmbeddingTable> ingest_embeddings(const std::filesystem::path& path);
void save_embeddings(std::span<const EmbeddingTable> tables, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Wikipedia popularity client

enum class PopularitySource { live, cache, manual };

const char* to_string(PopularitySource source);

struct PopularityRecord {
    std::string author;
    long long wiki_char_length = 0;
    std::string fetched_at; // ISO-8601 UTC, empty for manual entries
    PopularitySource source = PopularitySource::cache;
};

// Page-length lookups with an aggressive CSV cache and a manual override
// file; never fabricates a number when offline and uncached.
class WikipediaClient {
public:
    struct Options {
        std::filesystem::path cache_dir;
        bool offline = false;
        std::optional<std::filesystem::path> manual_file; // CSV "author,chars,timestamp,source"
        std::string host = "en.wikipedia.org";
        int polite_delay_ms = 200;
    };

    explicit WikipediaClient(Options options);

    PopularityRecord fetch_length(const std::string& author);

private:
    Options options_;
    std::map<std::string, PopularityRecord> manual_;
    std::map<std::string, PopularityRecord> cache_;
    bool cache_loaded_ = false;

    std::filesystem::path cache_file() const;
    void load_cache();
    void store_cache() const;
};

} // namespace stylus
