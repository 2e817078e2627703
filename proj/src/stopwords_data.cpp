#include "stylus/perturb.hpp"

// Bundled English stop-word inventory, grouped by part of speech. The "all"
// list is the union used for masking and for the random-matched control.

namespace stylus {
namespace {

const char* const k_all[] = {
        "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and",
        "any", "are", "aren", "aren't", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "couldn", "couldn't", "d", "did",
        "didn", "didn't", "do", "does", "doesn", "doesn't", "doing", "don", "don't", "down",
        "during", "each", "few", "for", "from", "further", "had", "hadn", "hadn't", "has",
        "hasn", "hasn't", "have", "haven", "haven't", "having", "he", "her", "here", "hers",
        "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "isn",
        "isn't", "it", "it's", "its", "itself", "just", "ll", "m", "ma", "me", "mightn",
        "mightn't", "more", "most", "mustn", "mustn't", "my", "myself", "needn", "needn't",
        "no", "nor", "not", "now", "o", "of", "off", "on", "once", "only", "or", "other",
        "our", "ours", "ourselves", "out", "over", "own", "re", "s", "same", "shan", "shan't",
        "she", "she's", "should", "should've", "shouldn", "shouldn't", "so", "some", "such",
        "t", "than", "that", "that'll", "the", "their", "theirs", "them", "themselves", "then",
        "there", "these", "they", "this", "those", "through", "to", "too", "under", "until",
        "up", "ve", "very", "was", "wasn", "wasn't", "we", "were", "weren", "weren't", "what",
        "when", "where", "which", "while", "who", "whom", "why", "will", "with", "won",
        "won't", "wouldn", "wouldn't", "y", "you", "you'd", "you'll", "you're", "you've",
        "your", "yours", "yourself", "yourselves",
};
constexpr size_t k_all_len = 179;
const char* const k_adjective[] = {
        "down", "few", "further", "in", "just", "not", "now", "off", "only", "other", "out",
        "over", "own", "same", "through", "under", "up", "very",
};
constexpr size_t k_adjective_len = 18;
const char* const k_adverb[] = {
        "about", "above", "after", "again", "all", "any", "as", "before", "below", "between",
        "both", "but", "by", "down", "each", "further", "here", "how", "in", "just", "most",
        "no", "nor", "not", "now", "off", "on", "once", "only", "out", "over", "same", "so",
        "some", "t", "that", "then", "there", "this", "through", "to", "too", "under", "up",
        "very", "what", "when", "where", "while", "why",
};
constexpr size_t k_adverb_len = 50;
const char* const k_conjunction[] = {
        "after", "and", "as", "because", "before", "but", "for", "if", "nor", "now", "once",
        "only", "or", "so", "than", "that", "until", "when", "where", "while",
};
constexpr size_t k_conjunction_len = 20;
const char* const k_contraction[] = {
        "ain", "aren", "aren't", "couldn", "couldn't", "d", "didn", "didn't", "doesn",
        "doesn't", "don", "don't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't",
        "isn", "isn't", "it's", "ll", "mightn", "mightn't", "mustn", "mustn't", "needn",
        "needn't", "o", "re", "s", "shan", "shan't", "she's", "should've", "shouldn",
        "shouldn't", "t", "that'll", "wasn", "wasn't", "weren", "weren't", "won", "won't",
        "wouldn", "wouldn't", "you'd", "you'll", "you're", "you've",
};
constexpr size_t k_contraction_len = 51;
const char* const k_determiner[] = {
        "a", "all", "an", "any", "both", "each", "few", "her", "his", "its", "more", "most",
        "my", "no", "our", "some", "such", "that", "the", "their", "them", "these", "this",
        "those", "what", "which", "your",
};
constexpr size_t k_determiner_len = 27;
const char* const k_noun[] = {
        "all", "being", "but", "do", "doing", "down", "few", "have", "he", "if", "in", "m",
        "ma", "no", "out", "she", "up", "while", "why",
};
constexpr size_t k_noun_len = 19;
const char* const k_preposition[] = {
        "about", "above", "after", "against", "as", "at", "before", "below", "between", "but",
        "by", "down", "during", "for", "from", "in", "into", "of", "off", "on", "out", "over",
        "than", "through", "to", "under", "until", "up", "with",
};
constexpr size_t k_preposition_len = 29;
const char* const k_pronoun[] = {
        "all", "any", "both", "each", "few", "he", "her", "hers", "herself", "him", "himself",
        "his", "i", "it", "itself", "me", "more", "most", "myself", "other", "ours",
        "ourselves", "own", "same", "she", "some", "such", "that", "theirs", "them",
        "themselves", "these", "they", "this", "those", "we", "what", "which", "who", "whom",
        "y", "you", "yours", "yourself", "yourselves",
};
constexpr size_t k_pronoun_len = 45;
const char* const k_verb[] = {
        "am", "are", "be", "been", "being", "can", "d", "did", "do", "does", "doing", "down",
        "further", "had", "has", "have", "having", "is", "ll", "off", "other", "out", "own",
        "re", "s", "should", "up", "ve", "was", "were", "while", "will",
};
constexpr size_t k_verb_len = 32;

} // namespace

const std::set<std::string>& StopwordLexicon::category(StopCategory cat) const {
    return sets_[static_cast<size_t>(cat)];
}

bool StopwordLexicon::contains(StopCategory cat, std::string_view lowercased) const {
    const auto& s = category(cat);
    return s.find(std::string(lowercased)) != s.end();
}

const StopwordLexicon& StopwordLexicon::builtin() {
    static const StopwordLexicon lexicon = [] {
        StopwordLexicon lex;
        auto fill = [&](StopCategory cat, const char* const* words, size_t n) {
            auto& set = lex.sets_[static_cast<size_t>(cat)];
            for (size_t i = 0; i < n; ++i) set.insert(words[i]);
        };
        fill(StopCategory::all, k_all, k_all_len);
        fill(StopCategory::adjective, k_adjective, k_adjective_len);
        fill(StopCategory::adverb, k_adverb, k_adverb_len);
        fill(StopCategory::conjunction, k_conjunction, k_conjunction_len);
        fill(StopCategory::contraction, k_contraction, k_contraction_len);
        fill(StopCategory::determiner, k_determiner, k_determiner_len);
        fill(StopCategory::noun, k_noun, k_noun_len);
        fill(StopCategory::preposition, k_preposition, k_preposition_len);
        fill(StopCategory::pronoun, k_pronoun, k_pronoun_len);
        fill(StopCategory::verb, k_verb, k_verb_len);
        return lex;
    }();
    return lexicon;
}

} // namespace stylus
