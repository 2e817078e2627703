#include "stylus/detail/wikipedia_http.hpp"

#ifdef STYLUS_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace stylus::detail {

WikiFetchResult fetch_wiki_raw(const std::string& host, const std::string& encoded_title) {
    WikiFetchResult result;
#ifdef STYLUS_WITH_TLS
    httplib::SSLClient client(host, 443);
    client.enable_server_certificate_verification(true);
#else
    httplib::Client client(host, 80);
#endif
    client.set_connection_timeout(10);
    client.set_read_timeout(20);
    client.set_follow_location(true);
    auto res = client.Get("/w/index.php?action=raw&title=" + encoded_title);
    if (!res) return result;
    if (res->status == 404) {
        result.status = WikiFetchStatus::not_found;
        return result;
    }
    if (res->status != 200) return result;
    result.status = WikiFetchStatus::ok;
    result.body = res->body;
    return result;
}

} // namespace stylus::detail
