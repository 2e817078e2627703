#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "stylus/corpus.hpp"

namespace stylus {

// Per-novel sentence quotas. Withheld novels contribute only test samples.
struct SplitSpec {
    int train_per_novel = 0;
    int val_per_novel = 0;
    int test_per_novel = 0;
    int withheld_test_per_novel = 0;
    uint64_t seed = 0;

    static SplitSpec authorship_defaults(uint64_t seed = 0) { return {540, 34, 101, 101, seed}; }
    static SplitSpec genre_defaults(uint64_t seed = 0) { return {320, 20, 60, 60, seed}; }
    static SplitSpec defaults_for(Task task, uint64_t seed = 0) {
        return task == Task::authorship ? authorship_defaults(seed) : genre_defaults(seed);
    }
};

enum class SplitTag { train, val, test, unused };

const char* to_string(SplitTag tag);
SplitTag parse_split_tag(std::string_view name);

struct SplitAssignment {
    std::map<std::string, SplitTag> by_sample;

    size_t count(SplitTag tag) const;
    SplitTag tag_of(const std::string& sample_id) const;
};

// Seeded sampling without replacement, one independent stream per novel, so
// the assignment is reproducible and insensitive to novel ordering.
SplitAssignment assign_splits(const CorpusManifest& manifest, std::span<const Sample> samples,
                              const SplitSpec& spec);

// "sample_id<TAB>split", sorted by sample id.
void save_split(const SplitAssignment& assignment, const std::filesystem::path& path);
SplitAssignment load_split(const std::filesystem::path& path);

} // namespace stylus
