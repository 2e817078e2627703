#include "stylus/text.hpp"

#include "stylus/error.hpp"

namespace stylus {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateNovelId: return "DuplicateNovelId";
        case ErrorCode::EmptyNovel: return "EmptyNovel";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::MissingAnnotation: return "MissingAnnotation";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::UnknownSampleId: return "UnknownSampleId";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::DuplicateTriple: return "DuplicateTriple";
        case ErrorCode::UnknownGroup: return "UnknownGroup";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::PageNotFound: return "PageNotFound";
        case ErrorCode::NetworkUnavailable: return "NetworkUnavailable";
        case ErrorCode::EmptyPredictions: return "EmptyPredictions";
        case ErrorCode::NoMisattributions: return "NoMisattributions";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::NonpositiveAlpha: return "NonpositiveAlpha";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

char32_t utf8_decode(std::string_view s, size_t& i) {
    const auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
    if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
        char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
        i += 2;
        return cp >= 0x80 ? cp : 0xFFFD;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
        char32_t cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(byte(i + 1) & 0x3F) << 6) |
                      (byte(i + 2) & 0x3F);
        i += 3;
        return cp >= 0x800 ? cp : 0xFFFD;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        char32_t cp = (char32_t(b0 & 0x07) << 18) | (char32_t(byte(i + 1) & 0x3F) << 12) |
                      (char32_t(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
        i += 4;
        return cp >= 0x10000 && cp <= 0x10FFFF ? cp : 0xFFFD;
    }
    ++i;
    return 0xFFFD;
}

void utf8_encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t to_lower_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20; // Latin-1 uppercase
    if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;                                 // Y with diaeresis
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20; // Greek
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;             // Cyrillic
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

bool is_space_cp(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0xA0;
}

bool is_digit_cp(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_punct_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') || (cp >= '[' && cp <= '`') ||
               (cp >= '{' && cp <= '~');
    }
    switch (cp) {
        case 0xA1:   // inverted exclamation
        case 0xAB:   // left guillemet
        case 0xBB:   // right guillemet
        case 0xBF:   // inverted question
            return true;
        default: break;
    }
    if (cp >= 0x2010 && cp <= 0x205E) return true; // general punctuation block
    return false;
}

bool is_letter_cp(char32_t cp) {
    if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    // Outside ASCII, anything that is not whitespace, punctuation, or a
    // digit is treated as a letter; exact Unicode categories are not needed
    // for these corpora.
    return !is_space_cp(cp) && !is_punct_cp(cp) && !is_digit_cp(cp);
}

bool is_upper_cp(char32_t cp) { return to_lower_cp(cp) != cp; }

std::string lowercase(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        char32_t cp = utf8_decode(text, i);
        utf8_encode(to_lower_cp(cp), out);
    }
    return out;
}

std::vector<ByteSpan> whitespace_token_spans(std::string_view text) {
    std::vector<ByteSpan> spans;
    size_t i = 0;
    while (i < text.size()) {
        size_t probe = i;
        char32_t cp = utf8_decode(text, probe);
        if (is_space_cp(cp)) {
            i = probe;
            continue;
        }
        size_t begin = i;
        while (i < text.size()) {
            probe = i;
            cp = utf8_decode(text, probe);
            if (is_space_cp(cp)) break;
            i = probe;
        }
        spans.push_back({begin, i});
    }
    return spans;
}

size_t count_whitespace_tokens(std::string_view text) {
    return whitespace_token_spans(text).size();
}

ByteSpan strip_punct_core(std::string_view part) {
    size_t begin = 0;
    size_t end = part.size();
    size_t i = 0;
    size_t core_begin = part.size();
    size_t core_end = part.size();
    bool seen_word = false;
    while (i < part.size()) {
        size_t start = i;
        char32_t cp = utf8_decode(part, i);
        if (is_word_cp(cp)) {
            if (!seen_word) {
                core_begin = start;
                seen_word = true;
            }
            core_end = i;
        }
    }
    if (!seen_word) return {end, end};
    return {core_begin + begin, core_end};
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    size_t i = 0;
    bool pending_apostrophe = false;
    while (i < text.size()) {
        char32_t cp = utf8_decode(text, i);
        if (is_letter_cp(cp)) {
            if (pending_apostrophe) {
                current.push_back('\'');
                pending_apostrophe = false;
            }
            utf8_encode(to_lower_cp(cp), current);
        } else if (cp == '\'' && !current.empty()) {
            // keep only if a letter follows
            pending_apostrophe = true;
        } else {
            pending_apostrophe = false;
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string_view trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && is_space_cp(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space_cp(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string_view> split_view(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace stylus
