#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stylus/corpus.hpp"

namespace stylus {

enum class VariantKind {
    normal,
    lowercase,
    no_punctuation,
    mask_stopwords,
    shuffle,
    mask_propn,
    mask_random_matched,
    all_modifications,
};

enum class StopCategory {
    all,
    adjective,
    adverb,
    conjunction,
    contraction,
    determiner,
    noun,
    preposition,
    pronoun,
    verb,
};

inline constexpr size_t kStopCategoryCount = 10;

const char* to_string(StopCategory cat);
StopCategory parse_stop_category(std::string_view name);

struct VariantSpec {
    VariantKind kind = VariantKind::normal;
    StopCategory category = StopCategory::all; // mask_stopwords only
    uint64_t seed = 0;                         // shuffle / random-matched / all_modifications

    // "normal", "mask_stopwords_pronoun", "shuffle", ...
    std::string id() const;
    static VariantSpec parse(std::string_view id, uint64_t seed = 0);
};

class StopwordLexicon {
public:
    static const StopwordLexicon& builtin();

    const std::set<std::string>& category(StopCategory cat) const;
    bool contains(StopCategory cat, std::string_view lowercased) const;

private:
    std::array<std::set<std::string>, kStopCategoryCount> sets_;
};

struct PropnSpan {
    size_t begin = 0;
    size_t end = 0; // byte offsets into Sample::text, word-aligned
};

// Proper-noun spans per sample. External annotation files are the preferred
// source; heuristic_propn is an explicitly-labeled fallback.
class PropnAnnotation {
public:
    void add(const std::string& sample_id, PropnSpan span);
    const std::vector<PropnSpan>* find(const std::string& sample_id) const;
    void merge(const PropnAnnotation& other);
    size_t sample_count() const { return spans_.size(); }

    // Throws unless spans are in-bounds, non-overlapping, and word-aligned.
    void validate_against(const Sample& sample) const;

    // "sample_id<TAB>start<TAB>end"
    static PropnAnnotation load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::map<std::string, std::vector<PropnSpan>> spans_;
};

inline constexpr std::string_view kStopToken = "<STOP>";
inline constexpr std::string_view kPropnToken = "<PROPN>";

// Text-level transforms. The masking tokens <STOP> and <PROPN> pass through
// lowercasing and punctuation stripping unchanged so the transforms compose.
std::string lowercase_text(std::string_view text);
std::string strip_punctuation_text(std::string_view text);
std::string mask_stopwords_text(std::string_view text, StopCategory category,
                                const StopwordLexicon& lexicon);
std::string shuffle_text(std::string_view text, uint64_t sample_seed);
std::string mask_propn_text(std::string_view text, std::span<const PropnSpan> spans);
std::string mask_random_matched_text(std::string_view text, const StopwordLexicon& lexicon,
                                     uint64_t sample_seed);

// Applies one perturbation to a sample. Seeded kinds derive a per-sample
// stream from (spec.seed, sample_id) so parallel order never changes output.
// propn is required for mask_propn and all_modifications.
std::string apply_variant(const Sample& sample, const VariantSpec& spec,
                          const StopwordLexicon& lexicon,
                          const PropnAnnotation* propn = nullptr);

// Number of word-parts that mask_stopwords(category) would replace.
int stopword_count(const Sample& sample, StopCategory category, const StopwordLexicon& lexicon);

// Capitalization-heuristic fallback tagger. Marks capitalized mid-sentence
// words that are neither stop words nor bundled common-capitalized forms
// (titles, weekdays, months); sentence-initial words only when the same word
// appears capitalized mid-sentence elsewhere in the evidence set.
PropnAnnotation heuristic_propn(const Sample& sample, const StopwordLexicon& lexicon);
PropnAnnotation heuristic_propn_for_novel(std::span<const Sample> samples,
                                          const StopwordLexicon& lexicon);

const std::set<std::string>& common_capitalized_list();

} // namespace stylus
