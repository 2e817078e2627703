#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 and tokenization helpers shared by the corpus, perturbation, and
// classifier modules. Case mapping covers ASCII, Latin-1, Latin Extended-A,
// and the basic Greek/Cyrillic blocks, which is the character inventory of
// the target corpora.

namespace stylus {

// Decodes the codepoint starting at byte i and advances i past it.
// Malformed bytes decode as U+FFFD and advance one byte.
char32_t utf8_decode(std::string_view s, size_t& i);

void utf8_encode(char32_t cp, std::string& out);

char32_t to_lower_cp(char32_t cp);

bool is_space_cp(char32_t cp);
bool is_digit_cp(char32_t cp);
bool is_punct_cp(char32_t cp);
bool is_letter_cp(char32_t cp);
bool is_upper_cp(char32_t cp);

// Letter or digit; the character class used for word cores.
inline bool is_word_cp(char32_t cp) { return is_letter_cp(cp) || is_digit_cp(cp); }

std::string lowercase(std::string_view text);

struct ByteSpan {
    size_t begin = 0;
    size_t end = 0;
    size_t size() const { return end - begin; }
};

// Maximal runs of non-whitespace bytes.
std::vector<ByteSpan> whitespace_token_spans(std::string_view text);
size_t count_whitespace_tokens(std::string_view text);

// Trims leading/trailing non-word codepoints from a token, returning the span
// of the remaining core (empty span positioned at the end if no word chars).
ByteSpan strip_punct_core(std::string_view part);

// Lowercased feature tokens: maximal letter runs, keeping apostrophes that
// sit between letters ("don't" stays one token). Digits and punctuation are
// skipped.
std::vector<std::string> word_tokens(std::string_view text);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split_view(std::string_view s, char sep);

} // namespace stylus
