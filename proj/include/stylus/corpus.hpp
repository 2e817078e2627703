#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylus {

enum class Task { authorship, genre };

const char* to_string(Task task);
Task parse_task(std::string_view name);

struct NovelDoc {
    std::string novel_id;
    std::string class_label; // author name or genre name
    std::string title;
    int year = 0;
    std::string raw_text;
    bool withheld = false;
};

// One filtered sentence; the atom of every experiment.
struct Sample {
    std::string sample_id;
    std::string novel_id;
    std::string class_label;
    std::string text;
    int word_count = 0;
    bool from_withheld_novel = false;
};

struct NovelMeta {
    std::string novel_id;
    std::string class_label;
    std::string title;
    int year = 0;
    bool withheld = false;
};

struct CorpusManifest {
    Task task = Task::authorship;
    std::vector<std::string> classes; // sorted, unique
    std::vector<NovelMeta> novels;    // descriptor order
    std::map<std::string, size_t> samples_per_novel;
    std::vector<std::string> warnings; // novels below the task's inclusion threshold
};

// Character-normalization rules, shipped as data so they can be audited and
// extended. Each rule rewrites one codepoint to a replacement string.
struct NormalizationTable {
    std::vector<std::pair<char32_t, std::string>> rules;

    static const NormalizationTable& builtin();

    // Override file: one rule per line, "U+XXXX<TAB>replacement".
    static NormalizationTable load(const std::filesystem::path& file);

    const std::string* find(char32_t cp) const;
};

// Quote/dash/ellipsis canonicalization plus whitespace cleanup: curly quotes
// to ASCII, en dash to em dash, ellipsis to "...", CR/CRLF to LF, runs of
// spaces and tabs collapsed to one space. Total and idempotent.
std::string normalize_text(std::string_view raw);
std::string normalize_text(std::string_view raw, const NormalizationTable& table);

// Rule-based splitter: boundaries after . ! ? plus trailing closing
// quotes/brackets, suppressed after bundled abbreviations and single-letter
// initials. Sentences are trimmed verbatim substrings of the input.
std::vector<std::string> segment_sentences(std::string_view text);

const std::vector<std::string>& abbreviation_list();

inline constexpr int kMinSampleWords = 20;
inline constexpr int kMaxSampleWords = 50;

// Keeps sentences whose whitespace token count is in [min_words, max_words],
// wrapping them as Samples with sequential ids "<novel_id>-NNNNN". Inner
// whitespace runs are canonicalized to single spaces.
std::vector<Sample> filter_samples(const std::vector<std::string>& sentences,
                                   const NovelDoc& novel, int min_words = kMinSampleWords,
                                   int max_words = kMaxSampleWords);

// Minimum qualifying samples per non-withheld novel before a warning is
// flagged in the manifest.
inline constexpr size_t kAuthorshipNovelFloor = 675;
inline constexpr size_t kGenreNovelFloor = 400;

CorpusManifest build_manifest(Task task, const std::vector<NovelDoc>& novels,
                              std::span<const Sample> samples);

struct BuiltCorpus {
    CorpusManifest manifest;
    std::vector<Sample> samples;
};

// normalize -> segment -> filter -> manifest, per novel.
BuiltCorpus build_corpus(Task task, const std::vector<NovelDoc>& novels);
BuiltCorpus build_corpus(Task task, const std::vector<NovelDoc>& novels,
                         const NormalizationTable& table);

// Descriptor file: one record per novel,
// "novel_id<TAB>class_label<TAB>title<TAB>year<TAB>withheld<TAB>path".
// Paths are resolved relative to the descriptor's directory.
std::vector<NovelDoc> load_corpus_descriptor(const std::filesystem::path& descriptor);

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);
CorpusManifest load_manifest(const std::filesystem::path& path);

// "sample_id<TAB>novel_id<TAB>class_label<TAB>withheld<TAB>text"
void save_samples(std::span<const Sample> samples, const std::filesystem::path& path);
std::vector<Sample> load_samples(const std::filesystem::path& path);

} // namespace stylus
