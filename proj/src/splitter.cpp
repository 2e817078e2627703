#include "stylus/splitter.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

namespace stylus {

const char* to_string(SplitTag tag) {
    switch (tag) {
        case SplitTag::train: return "train";
        case SplitTag::val: return "val";
        case SplitTag::test: return "test";
        case SplitTag::unused: return "unused";
    }
    return "unused";
}

SplitTag parse_split_tag(std::string_view name) {
    if (name == "train") return SplitTag::train;
    if (name == "val") return SplitTag::val;
    if (name == "test") return SplitTag::test;
    if (name == "unused") return SplitTag::unused;
    throw Error(ErrorCode::MalformedLine, "unknown split tag '" + std::string(name) + "'");
}

size_t SplitAssignment::count(SplitTag tag) const {
    size_t n = 0;
    for (const auto& [id, t] : by_sample)
        if (t == tag) ++n;
    return n;
}

SplitTag SplitAssignment::tag_of(const std::string& sample_id) const {
    auto it = by_sample.find(sample_id);
    if (it == by_sample.end()) throw Error(ErrorCode::UnknownSampleId, sample_id);
    return it->second;
}

SplitAssignment assign_splits(const CorpusManifest& manifest, std::span<const Sample> samples,
                              const SplitSpec& spec) {
    if (spec.train_per_novel < 0 || spec.val_per_novel < 0 || spec.test_per_novel < 0 ||
        spec.withheld_test_per_novel < 0)
        throw Error(ErrorCode::ConfigError, "split quotas must be nonnegative");

    // Samples grouped per novel in corpus order (ids are sequential).
    std::unordered_map<std::string, std::vector<const Sample*>> by_novel;
    for (const auto& sample : samples) by_novel[sample.novel_id].push_back(&sample);

    SplitAssignment assignment;
    for (const auto& novel : manifest.novels) {
        auto it = by_novel.find(novel.novel_id);
        const size_t available = it == by_novel.end() ? 0 : it->second.size();
        const size_t needed = novel.withheld
                                  ? static_cast<size_t>(spec.withheld_test_per_novel)
                                  : static_cast<size_t>(spec.train_per_novel) + spec.val_per_novel +
                                        spec.test_per_novel;
        if (available < needed)
            throw Error(ErrorCode::InsufficientSamples,
                        novel.novel_id + ": needed " + std::to_string(needed) + ", available " +
                            std::to_string(available));

        std::vector<size_t> order(available);
        for (size_t i = 0; i < available; ++i) order[i] = i;
        SplitMix64 rng(derive_seed(spec.seed, novel.novel_id));
        seeded_shuffle(order, rng);

        const auto& list = it->second;
        size_t cursor = 0;
        auto take = [&](size_t n, SplitTag tag) {
            for (size_t k = 0; k < n; ++k)
                assignment.by_sample[list[order[cursor++]]->sample_id] = tag;
        };
        if (novel.withheld) {
            take(spec.withheld_test_per_novel, SplitTag::test);
        } else {
            take(spec.train_per_novel, SplitTag::train);
            take(spec.val_per_novel, SplitTag::val);
            take(spec.test_per_novel, SplitTag::test);
        }
        take(available - cursor, SplitTag::unused);
    }
    return assignment;
}

void save_split(const SplitAssignment& assignment, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& [id, tag] : assignment.by_sample) out << id << '\t' << to_string(tag) << "\n";
    write_file_atomic(path, out.str());
}

SplitAssignment load_split(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open split " + path.string());
    SplitAssignment assignment;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 2)
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": expected 2 fields");
        assignment.by_sample[std::string(fields[0])] = parse_split_tag(fields[1]);
    }
    return assignment;
}

} // namespace stylus
