#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "stylus/corpus.hpp"
#include "stylus/error.hpp"
#include "stylus/rng.hpp"
#include "stylus/text.hpp"

using namespace stylus;

namespace {

NovelDoc make_novel(std::string id, std::string label, std::string text, bool withheld = false) {
    NovelDoc novel;
    novel.novel_id = std::move(id);
    novel.class_label = std::move(label);
    novel.title = novel.novel_id;
    novel.year = 1900;
    novel.raw_text = std::move(text);
    novel.withheld = withheld;
    return novel;
}

// n sentences of `words` words each, every one inside the 20..50 filter
std::string synthetic_novel_text(size_t n, int words = 24) {
    std::ostringstream out;
    for (size_t s = 0; s < n; ++s) {
        for (int w = 0; w < words; ++w) {
            if (w) out << ' ';
            out << "word" << ((s + static_cast<size_t>(w)) % 97);
        }
        out << ". ";
    }
    return out.str();
}

} // namespace

TEST_CASE("normalize_text maps quotes, dashes, ellipsis") {
    // curly double quotes, em dash, ellipsis
    const std::string input = "\xE2\x80\x9CHello\xE2\x80\x94world\xE2\x80\xA6\xE2\x80\x9D";
    CHECK(normalize_text(input) == "\"Hello\xE2\x80\x94world...\"");
    CHECK(normalize_text("a  b\r\nc") == "a b\nc");
    // en dash canonicalized to em dash
    CHECK(normalize_text("1914\xE2\x80\x93 1918") == "1914\xE2\x80\x94 1918");
    // curly single quotes
    CHECK(normalize_text("\xE2\x80\x98tis\xE2\x80\x99") == "'tis'");
}

TEST_CASE("normalize_text is idempotent on random strings") {
    const std::vector<std::string> pool = {
        "a", "B", "z", " ", "  ", "\t", "\r\n", "\r", "\n", ".", ",", "!", "?",
        "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x93",
        "\xE2\x80\x94", "\xE2\x80\xA6", "e\xCC\x81", "\xC3\xA9", "x", "'", "\"",
    };
    SplitMix64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        std::string s;
        const size_t len = 1 + rng.next_below(40);
        for (size_t i = 0; i < len; ++i) s += pool[rng.next_below(pool.size())];
        std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("normalization table overrides extend the shipped rules") {
    auto dir = std::filesystem::temp_directory_path() / "stylus_norm_test";
    std::filesystem::create_directories(dir);
    // replace the single-quote rule and add a new codepoint
    std::ofstream out(dir / "table.tsv");
    out << "U+2019\t`\n";
    out << "U+00A9\t(c)\n";
    out.close();
    auto table = NormalizationTable::load(dir / "table.tsv");
    CHECK(normalize_text("it\xE2\x80\x99s \xC2\xA9 1890", table) == "it`s (c) 1890");
    // untouched rules still apply
    CHECK(normalize_text("\xE2\x80\x9Cq\xE2\x80\x9D", table) == "\"q\"");
    std::filesystem::remove_all(dir);
}

TEST_CASE("segment_sentences basic boundaries") {
    auto sentences = segment_sentences("He left. She stayed.");
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0] == "He left.");
    CHECK(sentences[1] == "She stayed.");
}

TEST_CASE("segment_sentences abbreviation suppression") {
    auto sentences = segment_sentences("Mrs. Sowerberry spoke.");
    REQUIRE(sentences.size() == 1);
    CHECK(sentences[0] == "Mrs. Sowerberry spoke.");

    sentences = segment_sentences("R. D. Blackmore wrote it. Then he left.");
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0] == "R. D. Blackmore wrote it.");
}

TEST_CASE("segment_sentences closing quotes and brackets") {
    // terminators inside closed quotes are boundaries under the shipped rule
    auto sentences = segment_sentences("\"Stop!\" he cried. (It failed.) Done.");
    REQUIRE(sentences.size() == 4);
    CHECK(sentences[0] == "\"Stop!\"");
    CHECK(sentences[1] == "he cried.");
    CHECK(sentences[2] == "(It failed.)");
    CHECK(sentences[3] == "Done.");
}

TEST_CASE("segment_sentences empty input") {
    CHECK(segment_sentences("").empty());
    CHECK(segment_sentences("   \n  ").empty());
}

TEST_CASE("segment_sentences synthetic document with known boundaries") {
    // the generator knows the true sentence count; abbreviations and initials
    // appear mid-sentence only
    const std::vector<std::string> words = {"the", "old", "house", "stood", "near",
                                            "river", "bank", "under", "grey", "sky"};
    const std::vector<std::string> abbrevs = {"Mr.", "Mrs.", "Dr.", "St.", "Col."};
    const std::vector<std::string> names = {"Harding", "Bell", "Grant", "Finch"};
    const char terminators[] = {'.', '!', '?'};
    SplitMix64 rng(7);
    std::ostringstream doc;
    const size_t kSentences = 200;
    for (size_t s = 0; s < kSentences; ++s) {
        std::ostringstream sentence;
        sentence << "Opening";
        const size_t len = 4 + rng.next_below(8);
        for (size_t w = 0; w < len; ++w) {
            sentence << ' ';
            if (rng.next_below(4) == 0) {
                sentence << abbrevs[rng.next_below(abbrevs.size())] << ' '
                         << names[rng.next_below(names.size())];
            } else if (rng.next_below(9) == 0) {
                sentence << "J. " << names[rng.next_below(names.size())];
            } else {
                sentence << words[rng.next_below(words.size())];
            }
        }
        sentence << terminators[rng.next_below(3)];
        doc << sentence.str();
        doc << (rng.next_below(5) == 0 ? "\n" : " ");
    }
    auto sentences = segment_sentences(doc.str());
    CHECK(sentences.size() == kSentences);

    // concatenation preserves every non-whitespace character in order
    std::string joined;
    for (const auto& s : sentences) joined += s;
    std::string expect;
    for (char c : doc.str())
        if (!is_space_cp(static_cast<unsigned char>(c))) expect.push_back(c);
    std::string got;
    for (char c : joined)
        if (!is_space_cp(static_cast<unsigned char>(c))) got.push_back(c);
    CHECK(got == expect);
}

TEST_CASE("filter_samples word-count window") {
    NovelDoc novel = make_novel("n1", "author_a", "");
    const std::string kept24 =
        "``Then come with me,'' said Mrs. Sowerberry: taking up a dim and dirty lamp, and "
        "leading the way upstairs; ``your bed's under the counter.''";
    std::string w50, w51, w20, w19;
    for (int i = 0; i < 51; ++i) {
        if (i < 50) w50 += (i ? " w" : "w");
        w51 += (i ? " w" : "w");
        if (i < 20) w20 += (i ? " w" : "w");
        if (i < 19) w19 += (i ? " w" : "w");
    }
    auto samples = filter_samples({kept24, "Short sentence here.", w50, w51, w20, w19}, novel);
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].text == kept24);
    CHECK(samples[0].word_count == 24);
    CHECK(samples[1].word_count == 50);
    CHECK(samples[2].word_count == 20);
    CHECK(samples[0].sample_id == "n1-00000");
    CHECK(samples[1].sample_id == "n1-00001");
}

TEST_CASE("filter_samples canonicalizes inner whitespace") {
    NovelDoc novel = make_novel("n1", "a", "");
    std::string sentence = "one two";
    for (int i = 0; i < 18; ++i) sentence += (i == 8) ? "\nmid" : " w";
    auto samples = filter_samples({sentence}, novel);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].text.find('\n') == std::string::npos);
    CHECK(samples[0].word_count ==
          static_cast<int>(count_whitespace_tokens(samples[0].text)));
}

TEST_CASE("build_manifest counts and warnings") {
    std::vector<NovelDoc> novels = {
        make_novel("n1", "a", synthetic_novel_text(700)),
        make_novel("n2", "b", synthetic_novel_text(700)),
        make_novel("n3", "c", synthetic_novel_text(700)),
    };
    auto built = build_corpus(Task::authorship, novels);
    CHECK(built.manifest.warnings.empty());
    CHECK(built.manifest.samples_per_novel.at("n1") == 700);
    CHECK(built.manifest.classes == std::vector<std::string>{"a", "b", "c"});

    // the inclusion floor: one novel below 675 flags a warning
    novels[1] = make_novel("n2", "b", synthetic_novel_text(674));
    built = build_corpus(Task::authorship, novels);
    REQUIRE(built.manifest.warnings.size() == 1);
    CHECK(built.manifest.warnings[0].find("n2") == 0);

    // genre floor is 400
    auto genre = build_corpus(Task::genre, {make_novel("g1", "fantasy", synthetic_novel_text(399)),
                                            make_novel("g2", "horror", synthetic_novel_text(400))});
    REQUIRE(genre.manifest.warnings.size() == 1);
    CHECK(genre.manifest.warnings[0].find("g1") == 0);

    // withheld novels are exempt from the floor
    auto withheld = build_corpus(
        Task::authorship, {make_novel("w1", "a", synthetic_novel_text(100), true),
                           make_novel("w2", "b", synthetic_novel_text(700))});
    CHECK(withheld.manifest.warnings.empty());
}

TEST_CASE("build_manifest error paths") {
    std::vector<NovelDoc> dup = {make_novel("n1", "a", synthetic_novel_text(5)),
                                 make_novel("n1", "b", synthetic_novel_text(5))};
    CHECK_THROWS_WITH_AS(build_corpus(Task::authorship, dup), doctest::Contains("n1"), Error);

    std::vector<NovelDoc> empty = {make_novel("n1", "a", "Too short. Tiny.")};
    try {
        build_corpus(Task::authorship, empty);
        FAIL("expected EmptyNovel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyNovel);
    }
}

TEST_CASE("corpus pipeline is deterministic") {
    std::vector<NovelDoc> novels = {make_novel("n1", "a", synthetic_novel_text(30)),
                                    make_novel("n2", "b", synthetic_novel_text(31))};
    auto a = build_corpus(Task::genre, novels);
    auto b = build_corpus(Task::genre, novels);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].sample_id == b.samples[i].sample_id);
        CHECK(a.samples[i].text == b.samples[i].text);
    }
}

TEST_CASE("sample word counts recompute from text") {
    auto built = build_corpus(Task::genre, {make_novel("n1", "a", synthetic_novel_text(25))});
    for (const auto& s : built.samples) {
        CHECK(s.word_count == static_cast<int>(count_whitespace_tokens(s.text)));
        CHECK(s.text.find('\n') == std::string::npos);
        CHECK(s.text == std::string(trim(s.text)));
    }
}

TEST_CASE("loaders accept CRLF line endings") {
    auto dir = std::filesystem::temp_directory_path() / "stylus_crlf_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "samples.tsv", std::ios::binary);
        out << "s1\tn1\ta\t0\tsome text here\r\n";
        out << "s2\tn1\ta\t1\tmore words\r\n";
    }
    auto samples = load_samples(dir / "samples.tsv");
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].text == "some text here"); // no trailing CR
    CHECK(samples[1].from_withheld_novel);
    std::filesystem::remove_all(dir);
}

TEST_CASE("manifest and samples file round trip") {
    auto built = build_corpus(Task::genre, {make_novel("n1", "fantasy", synthetic_novel_text(10)),
                                            make_novel("n2", "horror", synthetic_novel_text(12), true)});
    auto dir = std::filesystem::temp_directory_path() / "stylus_corpus_test";
    std::filesystem::create_directories(dir);
    save_manifest(built.manifest, dir / "manifest.tsv");
    save_samples(built.samples, dir / "samples.tsv");
    auto manifest = load_manifest(dir / "manifest.tsv");
    auto samples = load_samples(dir / "samples.tsv");
    CHECK(manifest.task == Task::genre);
    CHECK(manifest.classes == built.manifest.classes);
    CHECK(manifest.samples_per_novel == built.manifest.samples_per_novel);
    REQUIRE(samples.size() == built.samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].sample_id == built.samples[i].sample_id);
        CHECK(samples[i].text == built.samples[i].text);
        CHECK(samples[i].from_withheld_novel == built.samples[i].from_withheld_novel);
        CHECK(samples[i].word_count == built.samples[i].word_count);
    }
    std::filesystem::remove_all(dir);
}
