#include "stylus/probe_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stylus/detail/wikipedia_http.hpp"
#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/text.hpp"

namespace stylus {

namespace {

using json = nlohmann::json;

std::string task_field(Task task) { return task == Task::authorship ? "AUTHOR" : "GENRE"; }

constexpr std::string_view kT5MaskTag = "<extra_id_0>";

} // namespace

const char* to_string(FinetuneStyle style) {
    return style == FinetuneStyle::t5_mask ? "t5_mask" : "causal_suffix";
}

FinetuneStyle parse_finetune_style(std::string_view name) {
    if (name == "t5_mask") return FinetuneStyle::t5_mask;
    if (name == "causal_suffix") return FinetuneStyle::causal_suffix;
    throw Error(ErrorCode::ConfigError, "unknown fine-tune style '" + std::string(name) + "'");
}

std::vector<FinetuneRecord> emit_finetune_records(std::span<const Sample> samples, Task task,
                                                  FinetuneStyle style) {
    const std::string field = task_field(task);
    std::vector<FinetuneRecord> records;
    records.reserve(samples.size());
    for (const auto& sample : samples) {
        FinetuneRecord rec;
        rec.sample_id = sample.sample_id;
        if (style == FinetuneStyle::t5_mask) {
            rec.input_text = field + ": " + std::string(kT5MaskTag) + " | " + sample.text;
            rec.output_text = field + ": " + sample.class_label + " | " + sample.text;
        } else {
            rec.input_text = sample.text + " | " + field + ": ";
            rec.output_text = sample.text + " | " + field + ": " + sample.class_label;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

ParsedFinetune parse_finetune_output(std::string_view output_text, Task task,
                                     FinetuneStyle style) {
    const std::string field = task_field(task);
    if (style == FinetuneStyle::t5_mask) {
        const std::string prefix = field + ": ";
        if (output_text.rfind(prefix, 0) != 0)
            throw Error(ErrorCode::MalformedLine, "missing '" + prefix + "' prefix");
        size_t sep = output_text.find(" | ", prefix.size());
        if (sep == std::string_view::npos)
            throw Error(ErrorCode::MalformedLine, "missing ' | ' separator");
        return {std::string(output_text.substr(prefix.size(), sep - prefix.size())),
                std::string(output_text.substr(sep + 3))};
    }
    const std::string sep = " | " + field + ": ";
    size_t pos = output_text.rfind(sep);
    if (pos == std::string_view::npos)
        throw Error(ErrorCode::MalformedLine, "missing '" + sep + "' separator");
    return {std::string(output_text.substr(pos + sep.size())),
            std::string(output_text.substr(0, pos))};
}

void save_finetune_records(std::span<const FinetuneRecord> records,
                           const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& rec : records) {
        json line = {{"sample_id", rec.sample_id}, {"input", rec.input_text},
                     {"output", rec.output_text}};
        out << line.dump() << "\n";
    }
    write_file_atomic(path, out.str());
}

std::vector<FinetuneRecord> load_finetune_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<FinetuneRecord> records;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorCode::MalformedLine, path.string() + ":" + std::to_string(line_no));
        records.push_back(FinetuneRecord{doc.at("sample_id").get<std::string>(),
                                         doc.at("input").get<std::string>(),
                                         doc.at("output").get<std::string>()});
    }
    return records;
}

std::vector<PredictionRecord> ingest_predictions(const std::filesystem::path& path,
                                                 const std::set<std::string>& classes,
                                                 const std::set<std::string>* known_sample_ids) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open predictions " + path.string());
    std::vector<PredictionRecord> records;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 6)
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
        PredictionRecord rec;
        rec.sample_id = std::string(fields[0]);
        rec.model_id = std::string(fields[1]);
        rec.variant_id = std::string(fields[2]);
        std::string predicted(fields[3]);
        rec.true_label = std::string(fields[4]);
        if (fields[5] != "0" && fields[5] != "1")
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": withheld must be 0 or 1");
        rec.from_withheld_novel = fields[5] == "1";
        if (known_sample_ids && !known_sample_ids->count(rec.sample_id))
            throw Error(ErrorCode::UnknownSampleId,
                        path.string() + ":" + std::to_string(line_no) + ": " + rec.sample_id);
        if (classes.count(predicted)) {
            rec.predicted_label = std::move(predicted);
        } else {
            rec.predicted_label = std::string(kOutOfSet);
            rec.raw_predicted = std::move(predicted);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

// lowercased alphanumeric word sequence; punctuation acts as a separator
std::vector<std::string> name_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    size_t i = 0;
    while (i < text.size()) {
        char32_t cp = utf8_decode(text, i);
        if (is_word_cp(cp)) {
            utf8_encode(to_lower_cp(cp), current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

bool contains_subsequence(const std::vector<std::string>& haystack,
                          const std::vector<std::string>& needle) {
    if (needle.empty() || haystack.size() < needle.size()) return false;
    for (size_t start = 0; start + needle.size() <= haystack.size(); ++start) {
        bool match = true;
        for (size_t k = 0; k < needle.size(); ++k)
            if (haystack[start + k] != needle[k]) {
                match = false;
                break;
            }
        if (match) return true;
    }
    return false;
}

} // namespace

GenerationMatch match_generation(std::string_view generation, std::string_view target_label) {
    GenerationMatch result;
    auto gen_tokens = name_tokens(generation);
    auto target_tokens = name_tokens(target_label);
    if (target_tokens.empty()) return result;
    result.full = contains_subsequence(gen_tokens, target_tokens);
    result.surname = contains_subsequence(gen_tokens, {target_tokens.back()});
    return result;
}

const char* to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::count: return "count";
        case WeightKind::attention_sum: return "attention_sum";
        case WeightKind::attribution_sum: return "attribution_sum";
    }
    return "count";
}

WeightKind parse_weight_kind(std::string_view name) {
    if (name == "count") return WeightKind::count;
    if (name == "attention_sum") return WeightKind::attention_sum;
    if (name == "attribution_sum") return WeightKind::attribution_sum;
    throw Error(ErrorCode::ConfigError, "unknown weight kind '" + std::string(name) + "'");
}

WeightMatrix WeightMatrix::from_triples(std::span<const WeightTriple> triples, WeightKind kind,
                                        bool clamp_negatives, std::vector<std::string>* warnings) {
    WeightMatrix m;
    m.kind_ = kind;
    std::set<std::string> groups, tokens;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& t : triples) {
        if (!seen.insert({t.group, t.token_type}).second)
            throw Error(ErrorCode::DuplicateTriple, t.group + " / " + t.token_type);
        groups.insert(t.group);
        tokens.insert(t.token_type);
    }
    m.groups_.assign(groups.begin(), groups.end());
    m.token_types_.assign(tokens.begin(), tokens.end());
    m.weights_.assign(m.groups_.size() * m.token_types_.size(), 0.0);
    for (const auto& t : triples) {
        double w = t.weight;
        if (w < 0) {
            const bool may_clamp = clamp_negatives && kind == WeightKind::attribution_sum;
            if (!may_clamp)
                throw Error(ErrorCode::NegativeWeight,
                            t.group + " / " + t.token_type + " = " + std::to_string(w));
            if (warnings)
                warnings->push_back("clamped negative attribution " + t.group + " / " +
                                    t.token_type + " (" + std::to_string(w) + ") to 0");
            w = 0;
        }
        size_t g = static_cast<size_t>(
            std::lower_bound(m.groups_.begin(), m.groups_.end(), t.group) - m.groups_.begin());
        size_t c = static_cast<size_t>(
            std::lower_bound(m.token_types_.begin(), m.token_types_.end(), t.token_type) -
            m.token_types_.begin());
        m.weights_[g * m.token_types_.size() + c] = w;
    }
    return m;
}

size_t WeightMatrix::group_index(const std::string& group) const {
    auto it = std::lower_bound(groups_.begin(), groups_.end(), group);
    if (it == groups_.end() || *it != group) throw Error(ErrorCode::UnknownGroup, group);
    return static_cast<size_t>(it - groups_.begin());
}

double WeightMatrix::row_sum(size_t group) const {
    double sum = 0;
    for (size_t c = 0; c < token_types_.size(); ++c) sum += at(group, c);
    return sum;
}

WeightMatrix ingest_weight_matrix(const std::filesystem::path& path, WeightKind kind,
                                  bool clamp_negatives, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open weight file " + path.string());
    std::vector<WeightTriple> triples;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 3)
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
        try {
            triples.push_back(WeightTriple{std::string(fields[0]), std::string(fields[1]),
                                           std::stod(std::string(fields[2]))});
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": bad weight");
        }
    }
    return WeightMatrix::from_triples(triples, kind, clamp_negatives, warnings);
}

void save_weight_matrix(const WeightMatrix& matrix, const std::filesystem::path& path) {
    std::ostringstream out;
    out.precision(17);
    for (size_t g = 0; g < matrix.groups().size(); ++g)
        for (size_t c = 0; c < matrix.token_types().size(); ++c)
            if (matrix.at(g, c) != 0.0)
                out << matrix.groups()[g] << '\t' << matrix.token_types()[c] << '\t'
                    << matrix.at(g, c) << "\n";
    write_file_atomic(path, out.str());
}

WeightMatrix standardize_groups(const WeightMatrix& matrix,
                                const std::map<std::string, int>& group_multiplicity) {
    for (const auto& [group, mult] : group_multiplicity) {
        matrix.group_index(group); // throws UnknownGroup
        if (mult < 1)
            throw Error(ErrorCode::ConfigError,
                        "multiplicity for " + group + " must be >= 1, got " + std::to_string(mult));
    }
    WeightMatrix out = matrix;
    for (const auto& [group, mult] : group_multiplicity) {
        size_t g = out.group_index(group);
        for (size_t c = 0; c < out.token_types().size(); ++c)
            out.at(g, c) /= static_cast<double>(mult);
    }
    return out;
}

const char* to_string(RowNormalization mode) {
    switch (mode) {
        case RowNormalization::none: return "none";
        case RowNormalization::mass: return "mass";
        case RowNormalization::unit_variance: return "unit_variance";
    }
    return "none";
}

RowNormalization parse_row_normalization(std::string_view name) {
    if (name == "none") return RowNormalization::none;
    if (name == "mass") return RowNormalization::mass;
    if (name == "unit_variance") return RowNormalization::unit_variance;
    throw Error(ErrorCode::ConfigError, "unknown row normalization '" + std::string(name) + "'");
}

WeightMatrix normalize_rows(const WeightMatrix& matrix, RowNormalization mode) {
    if (mode == RowNormalization::none) return matrix;
    WeightMatrix out = matrix;
    const size_t cols = out.token_types().size();
    for (size_t g = 0; g < out.groups().size(); ++g) {
        double scale = 0;
        if (mode == RowNormalization::mass) {
            scale = out.row_sum(g);
        } else {
            double mean = out.row_sum(g) / static_cast<double>(cols);
            double ss = 0;
            for (size_t c = 0; c < cols; ++c) {
                double d = out.at(g, c) - mean;
                ss += d * d;
            }
            scale = std::sqrt(ss / static_cast<double>(cols));
        }
        if (scale <= 0) continue; // constant or empty row left as-is
        for (size_t c = 0; c < cols; ++c) out.at(g, c) /= scale;
    }
    return out;
}

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
    auto it = vectors.find(word);
    return it == vectors.end() ? nullptr : &it->second;
}

std::vector<EmbeddingTable> ingest_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open embeddings " + path.string());

    struct Accum {
        std::vector<double> sum;
        long long support = 0;
    };
    std::map<std::string, std::map<std::string, Accum>> by_owner;
    size_t dim = 0;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorCode::MalformedLine, path.string() + ":" + std::to_string(line_no));
        auto vec = doc.at("vector").get<std::vector<double>>();
        if (dim == 0) dim = vec.size();
        if (vec.empty() || vec.size() != dim)
            throw Error(ErrorCode::DimensionMismatch,
                        path.string() + ":" + std::to_string(line_no) + ": got " +
                            std::to_string(vec.size()) + ", expected " + std::to_string(dim));
        const long long support = doc.value("support", 1LL);
        auto& acc = by_owner[doc.at("owner").get<std::string>()][doc.at("word").get<std::string>()];
        if (acc.sum.empty()) acc.sum.assign(dim, 0.0);
        for (size_t i = 0; i < dim; ++i) acc.sum[i] += vec[i] * static_cast<double>(support);
        acc.support += support;
    }

    std::vector<EmbeddingTable> tables;
    for (auto& [owner, words] : by_owner) {
        EmbeddingTable table;
        table.owner = owner;
        table.dim = dim;
        for (auto& [word, acc] : words) {
            std::vector<double> mean(dim);
            for (size_t i = 0; i < dim; ++i)
                mean[i] = acc.sum[i] / static_cast<double>(acc.support);
            table.vectors.emplace(word, std::move(mean));
            table.support.emplace(word, acc.support);
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

void save_embeddings(std::span<const EmbeddingTable> tables, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& table : tables) {
        for (const auto& [word, vec] : table.vectors) {
            json line = {{"owner", table.owner},
                         {"word", word},
                         {"vector", vec},
                         {"support", table.support.at(word)}};
            out << line.dump() << "\n";
        }
    }
    write_file_atomic(path, out.str());
}

// ---------------------------------------------------------------------------
// Wikipedia client

const char* to_string(PopularitySource source) {
    switch (source) {
        case PopularitySource::live: return "live";
        case PopularitySource::cache: return "cache";
        case PopularitySource::manual: return "manual";
    }
    return "cache";
}

namespace {

PopularitySource parse_popularity_source(std::string_view name) {
    if (name == "live") return PopularitySource::live;
    if (name == "manual") return PopularitySource::manual;
    return PopularitySource::cache;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::map<std::string, PopularityRecord> load_popularity_csv(const std::filesystem::path& path) {
    std::map<std::string, PopularityRecord> records;
    std::ifstream in(path);
    if (!in) return records;
    std::string line;
    while (get_line(in, line)) {
        if (line.empty() || line.rfind("author,", 0) == 0) continue;
        auto fields = csv_split(line);
        if (fields.size() != 4) throw Error(ErrorCode::MalformedLine, path.string() + ": " + line);
        PopularityRecord rec;
        rec.author = fields[0];
        rec.wiki_char_length = std::stoll(fields[1]);
        rec.fetched_at = fields[2];
        rec.source = parse_popularity_source(fields[3]);
        if (rec.wiki_char_length < 0)
            throw Error(ErrorCode::MalformedLine, path.string() + ": negative length");
        records[rec.author] = std::move(rec);
    }
    return records;
}

std::string utc_now_iso8601() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

size_t codepoint_count(std::string_view s) {
    size_t i = 0, n = 0;
    while (i < s.size()) {
        utf8_decode(s, i);
        ++n;
    }
    return n;
}

std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else if (c == ' ') {
            out.push_back('_'); // wiki titles use underscores
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::mutex g_rate_mutex;
std::chrono::steady_clock::time_point g_last_request;

} // namespace

WikipediaClient::WikipediaClient(Options options) : options_(std::move(options)) {
    if (options_.manual_file) manual_ = load_popularity_csv(*options_.manual_file);
}

std::filesystem::path WikipediaClient::cache_file() const {
    return options_.cache_dir / "wikipedia_lengths.csv";
}

void WikipediaClient::load_cache() {
    if (cache_loaded_) return;
    cache_ = load_popularity_csv(cache_file());
    cache_loaded_ = true;
}

void WikipediaClient::store_cache() const {
    std::ostringstream out;
    out << "author,chars,timestamp,source\n";
    for (const auto& [author, rec] : cache_)
        out << csv_escape(rec.author) << ',' << rec.wiki_char_length << ',' << rec.fetched_at
            << ',' << to_string(rec.source) << "\n";
    write_file_atomic(cache_file(), out.str());
}

PopularityRecord WikipediaClient::fetch_length(const std::string& author) {
    // precedence: manual override, then cache, then live
    if (auto it = manual_.find(author); it != manual_.end()) {
        PopularityRecord rec = it->second;
        rec.source = PopularitySource::manual;
        return rec;
    }
    load_cache();
    if (auto it = cache_.find(author); it != cache_.end()) {
        PopularityRecord rec = it->second;
        rec.source = PopularitySource::cache;
        return rec;
    }
    if (options_.offline)
        throw Error(ErrorCode::NetworkUnavailable, author + " not cached and offline mode is on");

    {
        std::lock_guard<std::mutex> lock(g_rate_mutex);
        auto since = std::chrono::steady_clock::now() - g_last_request;
        auto delay = std::chrono::milliseconds(options_.polite_delay_ms);
        if (since < delay) std::this_thread::sleep_for(delay - since);
        g_last_request = std::chrono::steady_clock::now();
    }
    auto fetched = detail::fetch_wiki_raw(options_.host, url_encode(author));
    if (fetched.status == detail::WikiFetchStatus::not_found)
        throw Error(ErrorCode::PageNotFound, author);
    if (fetched.status != detail::WikiFetchStatus::ok)
        throw Error(ErrorCode::NetworkUnavailable, "request to " + options_.host + " failed");

    PopularityRecord rec;
    rec.author = author;
    rec.wiki_char_length = static_cast<long long>(codepoint_count(fetched.body));
    rec.fetched_at = utc_now_iso8601();
    rec.source = PopularitySource::live;
    cache_[author] = rec;
    store_cache();
    return rec;
}

} // namespace stylus
