#include "stylus/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stylus/error.hpp"
#include "stylus/io_util.hpp"
#include "stylus/text.hpp"

namespace stylus {

const char* to_string(Task task) {
    return task == Task::authorship ? "authorship" : "genre";
}

Task parse_task(std::string_view name) {
    if (name == "authorship") return Task::authorship;
    if (name == "genre") return Task::genre;
    throw Error(ErrorCode::ConfigError, "unknown task '" + std::string(name) + "'");
}

const NormalizationTable& NormalizationTable::builtin() {
    static const NormalizationTable table{{
        {0x2018, "'"},   // left single curly quote
        {0x2019, "'"},   // right single curly quote
        {0x201A, "'"},   // low single quote
        {0x201B, "'"},   // reversed single quote
        {0x201C, "\""},  // left double curly quote
        {0x201D, "\""},  // right double curly quote
        {0x201E, "\""},  // low double quote
        {0x201F, "\""},  // reversed double quote
        {0x2013, "\xE2\x80\x94"}, // en dash -> em dash
        {0x2015, "\xE2\x80\x94"}, // horizontal bar -> em dash
        {0x2026, "..."}, // ellipsis
    }};
    return table;
}

NormalizationTable NormalizationTable::load(const std::filesystem::path& file) {
    NormalizationTable table = builtin();
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open normalization table " + file.string());
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 2 || fields[0].substr(0, 2) != "U+")
            throw Error(ErrorCode::MalformedLine,
                        file.string() + ":" + std::to_string(line_no) + ": expected U+XXXX<TAB>replacement");
        char32_t cp = static_cast<char32_t>(std::stoul(std::string(fields[0].substr(2)), nullptr, 16));
        std::string repl(fields[1]);
        auto it = std::find_if(table.rules.begin(), table.rules.end(),
                               [&](const auto& r) { return r.first == cp; });
        if (it != table.rules.end())
            it->second = repl;
        else
            table.rules.emplace_back(cp, repl);
    }
    return table;
}

const std::string* NormalizationTable::find(char32_t cp) const {
    for (const auto& [key, repl] : rules)
        if (key == cp) return &repl;
    return nullptr;
}

std::string normalize_text(std::string_view raw) {
    return normalize_text(raw, NormalizationTable::builtin());
}

std::string normalize_text(std::string_view raw, const NormalizationTable& table) {
    std::string out;
    out.reserve(raw.size());
    size_t i = 0;
    bool pending_space = false;
    auto flush_space = [&] {
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
    };
    while (i < raw.size()) {
        char32_t cp = utf8_decode(raw, i);
        if (cp == '\r') { // CRLF and bare CR both become LF
            if (i < raw.size() && raw[i] == '\n') ++i;
            cp = '\n';
        }
        if (cp == ' ' || cp == '\t') {
            pending_space = true;
            continue;
        }
        flush_space();
        if (const std::string* repl = table.find(cp)) {
            out += *repl;
        } else {
            utf8_encode(cp, out);
        }
    }
    flush_space();
    return out;
}

namespace {

const std::set<std::string>& abbreviation_set() {
    static const std::set<std::string> set = [] {
        std::set<std::string> s;
        for (const auto& a : abbreviation_list()) s.insert(lowercase(a));
        return s;
    }();
    return set;
}

bool is_closing_punct(char32_t cp) {
    return cp == '\'' || cp == '"' || cp == ')' || cp == ']' || cp == '}';
}

// The word immediately before position `pos` (which points at the
// terminator); empty when the preceding char is not a letter.
std::string word_before(std::string_view text, size_t pos) {
    size_t end = pos;
    size_t begin = end;
    while (begin > 0) {
        // scan back one ASCII/UTF-8 codepoint
        size_t prev = begin - 1;
        while (prev > 0 && (static_cast<unsigned char>(text[prev]) & 0xC0) == 0x80) --prev;
        size_t tmp = prev;
        char32_t cp = utf8_decode(text, tmp);
        if (!is_letter_cp(cp)) break;
        begin = prev;
    }
    return std::string(text.substr(begin, end - begin));
}

size_t count_codepoints(std::string_view s) {
    size_t i = 0, n = 0;
    while (i < s.size()) {
        utf8_decode(s, i);
        ++n;
    }
    return n;
}

} // namespace

const std::vector<std::string>& abbreviation_list() {
    static const std::vector<std::string> list = {
        "Mr",   "Mrs",  "Ms",   "Dr",   "St",  "Prof", "Rev",  "Hon",  "Capt", "Col",
        "Gen",  "Lt",   "Sgt",  "Maj",  "Adm", "Messrs", "Mme", "Mlle", "Esq", "Jr",
        "Sr",   "vs",   "etc",  "viz",  "cf",  "Co",   "Ltd",  "Inc",  "Bros", "ed",
        "eds",  "vol",  "ch",   "pp",   "Jan", "Feb",  "Aug",  "Sept", "Oct",  "Nov",
        "Dec",
    };
    return list;
}

std::vector<std::string> segment_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    size_t sentence_begin = 0;
    size_t i = 0;
    auto emit = [&](size_t end) {
        std::string_view sv = trim(text.substr(sentence_begin, end - sentence_begin));
        if (!sv.empty()) sentences.emplace_back(sv);
        sentence_begin = end;
    };
    while (i < text.size()) {
        size_t pos = i;
        char32_t cp = utf8_decode(text, i);
        if (cp != '.' && cp != '!' && cp != '?') continue;
        if (cp == '.') {
            std::string before = word_before(text, pos);
            if (!before.empty()) {
                if (count_codepoints(before) == 1) continue; // initial, "R. D. Blackmore"
                if (abbreviation_set().count(lowercase(before))) continue;
            }
        }
        // absorb closing quotes/brackets
        size_t end = i;
        while (end < text.size()) {
            size_t probe = end;
            char32_t closer = utf8_decode(text, probe);
            if (!is_closing_punct(closer)) break;
            end = probe;
        }
        // a boundary requires following whitespace (or end of input)
        if (end < text.size()) {
            size_t probe = end;
            char32_t next = utf8_decode(text, probe);
            if (!is_space_cp(next)) {
                i = end;
                continue;
            }
        }
        emit(end);
        i = end;
    }
    emit(text.size());
    return sentences;
}

std::vector<Sample> filter_samples(const std::vector<std::string>& sentences,
                                   const NovelDoc& novel, int min_words, int max_words) {
    std::vector<Sample> samples;
    size_t index = 0;
    for (const auto& sentence : sentences) {
        auto spans = whitespace_token_spans(sentence);
        int words = static_cast<int>(spans.size());
        if (words < min_words || words > max_words) continue;
        // canonical single spacing; sentences may span line breaks
        std::string canon;
        canon.reserve(sentence.size());
        for (size_t t = 0; t < spans.size(); ++t) {
            if (t) canon.push_back(' ');
            canon.append(sentence, spans[t].begin, spans[t].size());
        }
        char id[32];
        std::snprintf(id, sizeof(id), "-%05zu", index++);
        samples.push_back(Sample{novel.novel_id + id, novel.novel_id, novel.class_label,
                                 std::move(canon), words, novel.withheld});
    }
    return samples;
}

CorpusManifest build_manifest(Task task, const std::vector<NovelDoc>& novels,
                              std::span<const Sample> samples) {
    CorpusManifest manifest;
    manifest.task = task;
    std::set<std::string> ids;
    std::set<std::string> classes;
    for (const auto& novel : novels) {
        if (!ids.insert(novel.novel_id).second)
            throw Error(ErrorCode::DuplicateNovelId, novel.novel_id);
        classes.insert(novel.class_label);
        manifest.novels.push_back(
            NovelMeta{novel.novel_id, novel.class_label, novel.title, novel.year, novel.withheld});
        manifest.samples_per_novel[novel.novel_id] = 0;
    }
    manifest.classes.assign(classes.begin(), classes.end());
    for (const auto& sample : samples) {
        auto it = manifest.samples_per_novel.find(sample.novel_id);
        if (it == manifest.samples_per_novel.end())
            throw Error(ErrorCode::UnknownSampleId,
                        "sample " + sample.sample_id + " references unknown novel " + sample.novel_id);
        ++it->second;
    }
    const size_t floor = task == Task::authorship ? kAuthorshipNovelFloor : kGenreNovelFloor;
    for (const auto& novel : manifest.novels) {
        size_t count = manifest.samples_per_novel.at(novel.novel_id);
        if (count == 0) throw Error(ErrorCode::EmptyNovel, novel.novel_id);
        if (!novel.withheld && count < floor)
            manifest.warnings.push_back(novel.novel_id + ": " + std::to_string(count) +
                                        " qualifying samples, below the " + std::to_string(floor) +
                                        " floor for " + to_string(task));
    }
    return manifest;
}

BuiltCorpus build_corpus(Task task, const std::vector<NovelDoc>& novels) {
    return build_corpus(task, novels, NormalizationTable::builtin());
}

BuiltCorpus build_corpus(Task task, const std::vector<NovelDoc>& novels,
                         const NormalizationTable& table) {
    BuiltCorpus built;
    for (const auto& novel : novels) {
        std::string normalized = normalize_text(novel.raw_text, table);
        auto sentences = segment_sentences(normalized);
        auto samples = filter_samples(sentences, novel);
        built.samples.insert(built.samples.end(), std::make_move_iterator(samples.begin()),
                             std::make_move_iterator(samples.end()));
    }
    built.manifest = build_manifest(task, novels, built.samples);
    return built;
}

std::vector<NovelDoc> load_corpus_descriptor(const std::filesystem::path& descriptor) {
    std::ifstream in(descriptor);
    if (!in) throw Error(ErrorCode::IoError, "cannot open descriptor " + descriptor.string());
    std::vector<NovelDoc> novels;
    std::string line;
    size_t line_no = 0;
    const auto root = descriptor.parent_path();
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 6)
            throw Error(ErrorCode::MalformedLine,
                        descriptor.string() + ":" + std::to_string(line_no) + ": expected 6 fields");
        NovelDoc novel;
        novel.novel_id = std::string(fields[0]);
        novel.class_label = std::string(fields[1]);
        novel.title = std::string(fields[2]);
        novel.year = std::stoi(std::string(fields[3]));
        novel.withheld = fields[4] == "1" || fields[4] == "true";
        std::filesystem::path text_path{std::string(fields[5])};
        if (text_path.is_relative()) text_path = root / text_path;
        novel.raw_text = read_file(text_path);
        if (novel.class_label.empty())
            throw Error(ErrorCode::MalformedLine,
                        descriptor.string() + ":" + std::to_string(line_no) + ": empty class label");
        if (novel.raw_text.empty()) throw Error(ErrorCode::EmptyNovel, novel.novel_id);
        novels.push_back(std::move(novel));
    }
    return novels;
}

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "#task\t" << to_string(manifest.task) << "\n";
    for (const auto& warning : manifest.warnings) out << "#warning\t" << warning << "\n";
    for (const auto& novel : manifest.novels) {
        out << novel.novel_id << '\t' << novel.class_label << '\t' << novel.title << '\t'
            << novel.year << '\t' << (novel.withheld ? 1 : 0) << '\t'
            << manifest.samples_per_novel.at(novel.novel_id) << "\n";
    }
    write_file_atomic(path, out.str());
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
    CorpusManifest manifest;
    std::string line;
    size_t line_no = 0;
    std::set<std::string> classes;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_view(line, '\t');
        if (line[0] == '#') {
            if (fields[0] == "#task" && fields.size() == 2)
                manifest.task = parse_task(fields[1]);
            else if (fields[0] == "#warning" && fields.size() == 2)
                manifest.warnings.emplace_back(fields[1]);
            continue;
        }
        if (fields.size() != 6)
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": expected 6 fields");
        NovelMeta meta;
        meta.novel_id = std::string(fields[0]);
        meta.class_label = std::string(fields[1]);
        meta.title = std::string(fields[2]);
        meta.year = std::stoi(std::string(fields[3]));
        meta.withheld = fields[4] == "1";
        manifest.samples_per_novel[meta.novel_id] = std::stoul(std::string(fields[5]));
        classes.insert(meta.class_label);
        manifest.novels.push_back(std::move(meta));
    }
    manifest.classes.assign(classes.begin(), classes.end());
    return manifest;
}

void save_samples(std::span<const Sample> samples, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& s : samples) {
        out << s.sample_id << '\t' << s.novel_id << '\t' << s.class_label << '\t'
            << (s.from_withheld_novel ? 1 : 0) << '\t' << s.text << "\n";
    }
    write_file_atomic(path, out.str());
}

std::vector<Sample> load_samples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open samples " + path.string());
    std::vector<Sample> samples;
    std::string line;
    size_t line_no = 0;
    while (get_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_view(line, '\t');
        if (fields.size() != 5)
            throw Error(ErrorCode::MalformedLine,
                        path.string() + ":" + std::to_string(line_no) + ": expected 5 fields");
        Sample s;
        s.sample_id = std::string(fields[0]);
        s.novel_id = std::string(fields[1]);
        s.class_label = std::string(fields[2]);
        s.from_withheld_novel = fields[3] == "1";
        s.text = std::string(fields[4]);
        s.word_count = static_cast<int>(count_whitespace_tokens(s.text));
        samples.push_back(std::move(s));
    }
    return samples;
}

} // namespace stylus
