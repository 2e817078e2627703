#pragma once

#include <string>

namespace stylus::detail {

enum class WikiFetchStatus { ok, not_found, network_error };

struct WikiFetchResult {
    WikiFetchStatus status = WikiFetchStatus::network_error;
    std::string body;
};

// GETs the raw wikitext of the page (action=raw). Isolated in its own
// translation unit to keep the TLS dependency out of the rest of the build.
WikiFetchResult fetch_wiki_raw(const std::string& host, const std::string& encoded_title);

} // namespace stylus::detail
