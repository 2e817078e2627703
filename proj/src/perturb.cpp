#include "stylus/perturb.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

namespace stylus {

namespace {

constexpr std::string_view kMaskTokens[] = {kStopToken, kPropnToken};

// When a masking token starts at text[i], returns its length, else 0.
size_t mask_token_at(std::string_view text, size_t i) {
    for (std::string_view tok : kMaskTokens)
        if (text.compare(i, tok.size(), tok) == 0) return tok.size();
    return 0;
}

// A word-part: a token after apostrophe splitting, with its punctuation-free
// core. Stop-word matching, random-matched masking, and the proper-noun
// heuristic all operate on these.
struct WordPart {
    size_t token_index = 0;
    ByteSpan part;
    ByteSpan core; // zero-length when the part has no word characters
};

std::vector<WordPart> word_parts(std::string_view text) {
    std::vector<WordPart> parts;
    auto tokens = whitespace_token_spans(text);
    for (size_t t = 0; t < tokens.size(); ++t) {
        size_t begin = tokens[t].begin;
        const size_t token_end = tokens[t].end;
        while (begin <= token_end) {
            size_t end = begin;
            while (end < token_end && text[end] != '\'') ++end;
            ByteSpan core = strip_punct_core(text.substr(begin, end - begin));
            parts.push_back(WordPart{t, {begin, end}, {begin + core.begin, begin + core.end}});
            if (end >= token_end) break;
            begin = end + 1; // skip the apostrophe separator
        }
    }
    return parts;
}

struct Replacement {
    ByteSpan span;
    std::string_view text;
};

std::string splice(std::string_view text, std::vector<Replacement> repls) {
    std::sort(repls.begin(), repls.end(),
              [](const Replacement& a, const Replacement& b) { return a.span.begin < b.span.begin; });
    std::string out;
    out.reserve(text.size());
    size_t cursor = 0;
    for (const auto& r : repls) {
        out.append(text.substr(cursor, r.span.begin - cursor));
        out.append(r.text);
        cursor = r.span.end;
    }
    out.append(text.substr(cursor));
    return out;
}

std::string lowercase_core(std::string_view text, ByteSpan core) {
    return lowercase(text.substr(core.begin, core.size()));
}

} // namespace

const char* to_string(StopCategory cat) {
    switch (cat) {
        case StopCategory::all: return "all";
        case StopCategory::adjective: return "adjective";
        case StopCategory::adverb: return "adverb";
        case StopCategory::conjunction: return "conjunction";
        case StopCategory::contraction: return "contraction";
        case StopCategory::determiner: return "determiner";
        case StopCategory::noun: return "noun";
        case StopCategory::preposition: return "preposition";
        case StopCategory::pronoun: return "pronoun";
        case StopCategory::verb: return "verb";
    }
    return "all";
}

StopCategory parse_stop_category(std::string_view name) {
    for (size_t i = 0; i < kStopCategoryCount; ++i) {
        auto cat = static_cast<StopCategory>(i);
        if (name == to_string(cat)) return cat;
    }
    throw Error(ErrorCode::ConfigError, "unknown stop-word category '" + std::string(name) + "'");
}

std::string VariantSpec::id() const {
    switch (kind) {
        case VariantKind::normal: return "normal";
        case VariantKind::lowercase: return "lowercase";
        case VariantKind::no_punctuation: return "no_punctuation";
        case VariantKind::mask_stopwords: return std::string("mask_stopwords_") + to_string(category);
        case VariantKind::shuffle: return "shuffle";
        case VariantKind::mask_propn: return "mask_propn";
        case VariantKind::mask_random_matched: return "mask_random_matched";
        case VariantKind::all_modifications: return "all_modifications";
    }
    return "normal";
}

VariantSpec VariantSpec::parse(std::string_view id, uint64_t seed) {
    VariantSpec spec;
    spec.seed = seed;
    if (id == "normal") {
        spec.kind = VariantKind::normal;
    } else if (id == "lowercase") {
        spec.kind = VariantKind::lowercase;
    } else if (id == "no_punctuation") {
        spec.kind = VariantKind::no_punctuation;
    } else if (id == "shuffle") {
        spec.kind = VariantKind::shuffle;
    } else if (id == "mask_propn") {
        spec.kind = VariantKind::mask_propn;
    } else if (id == "mask_random_matched") {
        spec.kind = VariantKind::mask_random_matched;
    } else if (id == "all_modifications") {
        spec.kind = VariantKind::all_modifications;
    } else if (id == "mask_stopwords") {
        spec.kind = VariantKind::mask_stopwords; // category defaults to all
    } else if (id.rfind("mask_stopwords_", 0) == 0) {
        spec.kind = VariantKind::mask_stopwords;
        spec.category = parse_stop_category(id.substr(std::string_view("mask_stopwords_").size()));
    } else {
        throw Error(ErrorCode::ConfigError, "unknown variant '" + std::string(id) + "'");
    }
    return spec;
}

void PropnAnnotation::add(const std::string& sample_id, PropnSpan span) {
    spans_[sample_id].push_back(span);
}

const std::vector<PropnSpan>* PropnAnnotation::find(const std::string& sample_id) const {
    auto it = spans_.find(sample_id);
    return it == spans_.end() ? nullptr : &it->second;
}

void PropnAnnotation::merge(const PropnAnnotation& other) {
    for (const auto& [id, spans] : other.spans_) {
        auto& dst = spans_[id];
        dst.insert(dst.end(), spans.begin(), spans.end());
    }
}

void PropnAnnotation::validate_against(const Sample& sample) const {
    const auto* spans = find(sample.sample_id);
    if (!spans) return;
    std::vector<PropnSpan> sorted = *spans;
    std::sort(sorted.begin(), sorted.end(),
              [](const PropnSpan& a, const PropnSpan& b) { return a.begin < b.begin; });
    const std::string_view text = sample.text;
    size_t prev_end = 0;
    for (const auto& span : sorted) {
        if (span.begin >= span.end || span.end > text.size())
            throw Error(ErrorCode::MalformedLine,
                        sample.sample_id + ": span out of bounds [" + std::to_string(span.begin) +
                            "," + std::to_string(span.end) + ")");
        if (span.begin < prev_end)
            throw Error(ErrorCode::MalformedLine, sample.sample_id + ": overlapping spans");
        prev_end = span.end;
        for (size_t i = span.begin; i < span.end; ++i)
            if (is_space_cp(static_cast<unsigned char>(text[i])))
                throw Error(ErrorCode::MalformedLine,
                            sample.sample_id + ": span crosses a word boundary");
    }
}

PropnAnnotation PropnAnnotation::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open annotation " + path.string());
    PropnAnnotation ann;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 3)
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
        ann.add(std::string(fields[0]), PropnSpan{std::stoul(std::string(fields[1])),
                                                  std::stoul(std::string(fields[2]))});
    }
    return ann;
}

void PropnAnnotation::save(const std::filesystem::path& path) const {
    std::ostringstream out;
    for (const auto& [id, spans] : spans_)
        for (const auto& span : spans) out << id << '\t' << span.begin << '\t' << span.end << "\n";
    write_file_atomic(path, out.str());
}

std::string lowercase_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (size_t n = mask_token_at(text, i)) {
            out.append(text.substr(i, n));
            i += n;
            continue;
        }
        char32_t cp = utf8_decode(text, i);
        utf8_encode(to_lower_cp(cp), out);
    }
    return out;
}

std::string strip_punctuation_text(std::string_view text) {
    std::string kept;
    kept.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (size_t n = mask_token_at(text, i)) {
            kept.append(text.substr(i, n));
            i += n;
            continue;
        }
        char32_t cp = utf8_decode(text, i);
        if (!is_punct_cp(cp)) utf8_encode(cp, kept);
    }
    // collapse spaces left behind by deleted tokens, trim ends
    std::string out;
    out.reserve(kept.size());
    bool pending_space = false;
    for (char c : kept) {
        if (c == ' ') {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string mask_stopwords_text(std::string_view text, StopCategory category,
                                const StopwordLexicon& lexicon) {
    std::vector<Replacement> repls;
    for (const auto& part : word_parts(text)) {
        if (part.core.size() == 0) continue;
        if (lexicon.contains(category, lowercase_core(text, part.core)))
            repls.push_back({part.core, kStopToken});
    }
    return splice(text, std::move(repls));
}

std::string shuffle_text(std::string_view text, uint64_t sample_seed) {
    auto spans = whitespace_token_spans(text);
    std::vector<size_t> order(spans.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng(sample_seed);
    seeded_shuffle(order, rng);
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < order.size(); ++i) {
        if (i) out.push_back(' ');
        out.append(text.substr(spans[order[i]].begin, spans[order[i]].size()));
    }
    return out;
}

std::string mask_propn_text(std::string_view text, std::span<const PropnSpan> spans) {
    std::vector<Replacement> repls;
    for (const auto& span : spans) {
        if (span.begin >= span.end || span.end > text.size())
            throw Error(ErrorCode::MalformedLine, "proper-noun span out of bounds");
        repls.push_back({{span.begin, span.end}, kPropnToken});
    }
    return splice(text, std::move(repls));
}

std::string mask_random_matched_text(std::string_view text, const StopwordLexicon& lexicon,
                                     uint64_t sample_seed) {
    std::vector<ByteSpan> candidates;
    size_t stop_count = 0;
    for (const auto& part : word_parts(text)) {
        if (part.core.size() == 0) continue;
        if (lexicon.contains(StopCategory::all, lowercase_core(text, part.core)))
            ++stop_count;
        else
            candidates.push_back(part.core);
    }
    size_t k = std::min(stop_count, candidates.size());
    SplitMix64 rng(sample_seed);
    // partial Fisher-Yates: the first k entries are a uniform draw
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(rng.next_below(candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
    }
    std::vector<Replacement> repls;
    for (size_t i = 0; i < k; ++i) repls.push_back({candidates[i], kStopToken});
    return splice(text, std::move(repls));
}

std::string apply_variant(const Sample& sample, const VariantSpec& spec,
                          const StopwordLexicon& lexicon, const PropnAnnotation* propn) {
    const uint64_t sample_seed = derive_seed(spec.seed, sample.sample_id);
    auto propn_spans = [&]() -> std::span<const PropnSpan> {
        if (!propn) throw Error(ErrorCode::MissingAnnotation, sample.sample_id);
        const auto* spans = propn->find(sample.sample_id);
        if (!spans) return {};
        return *spans;
    };
    switch (spec.kind) {
        case VariantKind::normal: return sample.text;
        case VariantKind::lowercase: return lowercase_text(sample.text);
        case VariantKind::no_punctuation: return strip_punctuation_text(sample.text);
        case VariantKind::mask_stopwords:
            return mask_stopwords_text(sample.text, spec.category, lexicon);
        case VariantKind::shuffle: return shuffle_text(sample.text, sample_seed);
        case VariantKind::mask_propn: return mask_propn_text(sample.text, propn_spans());
        case VariantKind::mask_random_matched:
            return mask_random_matched_text(sample.text, lexicon, sample_seed);
        case VariantKind::all_modifications: {
            std::string step = mask_propn_text(sample.text, propn_spans());
            step = mask_stopwords_text(step, StopCategory::all, lexicon);
            step = strip_punctuation_text(step);
            step = lowercase_text(step);
            return shuffle_text(step, sample_seed);
        }
    }
    return sample.text;
}

int stopword_count(const Sample& sample, StopCategory category, const StopwordLexicon& lexicon) {
    int count = 0;
    const std::string_view text = sample.text;
    for (const auto& part : word_parts(text)) {
        if (part.core.size() == 0) continue;
        if (lexicon.contains(category, lowercase_core(text, part.core))) ++count;
    }
    return count;
}

const std::set<std::string>& common_capitalized_list() {
    static const std::set<std::string> list = {
        // titles and honorifics
        "mr", "mrs", "ms", "miss", "dr", "st", "prof", "rev", "hon", "capt", "col", "gen",
        "lt", "sgt", "maj", "adm", "sir", "lady", "lord", "madam", "madame", "monsieur",
        "mlle", "mme", "messrs", "master", "dame",
        // weekdays
        "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
        // months
        "january", "february", "march", "april", "may", "june", "july", "august",
        "september", "october", "november", "december",
    };
    return list;
}

namespace {

struct PropnCandidate {
    ByteSpan core;
    std::string lower;
    bool sentence_initial = false;
};

std::vector<PropnCandidate> propn_candidates(const Sample& sample,
                                             const StopwordLexicon& lexicon) {
    std::vector<PropnCandidate> out;
    const std::string_view text = sample.text;
    auto tokens = whitespace_token_spans(text);
    for (size_t t = 0; t < tokens.size(); ++t) {
        std::string_view token = text.substr(tokens[t].begin, tokens[t].size());
        ByteSpan core = strip_punct_core(token);
        if (core.size() == 0) continue;
        core.begin += tokens[t].begin;
        core.end += tokens[t].begin;
        size_t i = core.begin;
        char32_t first = utf8_decode(text, i);
        if (!is_upper_cp(first)) continue;
        std::string lower = lowercase(text.substr(core.begin, core.size()));
        if (lexicon.contains(StopCategory::all, lower)) continue;
        if (common_capitalized_list().count(lower)) continue;
        out.push_back(PropnCandidate{core, std::move(lower), t == 0});
    }
    return out;
}

PropnAnnotation annotate_with_evidence(std::span<const Sample> samples,
                                       const StopwordLexicon& lexicon) {
    // mid-sentence capitalization evidence across the sample set
    std::set<std::string> evidence;
    std::vector<std::vector<PropnCandidate>> per_sample;
    per_sample.reserve(samples.size());
    for (const auto& sample : samples) {
        per_sample.push_back(propn_candidates(sample, lexicon));
        for (const auto& cand : per_sample.back())
            if (!cand.sentence_initial) evidence.insert(cand.lower);
    }
    PropnAnnotation ann;
    for (size_t s = 0; s < samples.size(); ++s) {
        for (const auto& cand : per_sample[s]) {
            if (cand.sentence_initial && !evidence.count(cand.lower)) continue;
            ann.add(samples[s].sample_id, PropnSpan{cand.core.begin, cand.core.end});
        }
    }
    return ann;
}

} // namespace

PropnAnnotation heuristic_propn(const Sample& sample, const StopwordLexicon& lexicon) {
    return annotate_with_evidence(std::span<const Sample>(&sample, 1), lexicon);
}

PropnAnnotation heuristic_propn_for_novel(std::span<const Sample> samples,
                                          const StopwordLexicon& lexicon) {
    return annotate_with_evidence(samples, lexicon);
}

} // namespace stylus
