// SPDX-License-Identifier: Apache-2.0
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <deli/llm.hpp>

namespace deli::llm
{

namespace
{

// "https://host:port/v1" -> ("https://host:port", "/v1")
std::pair<std::string, std::string> split_url(const std::string& url)
{
    auto scheme = url.find("://");
    auto path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path == std::string::npos)
        return {url, ""};
    std::string prefix = url.substr(path);
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();
    return {url.substr(0, path), prefix};
}

} // namespace

Transport http_transport(const LiveConfig& config)
{
    auto [origin, prefix] = split_url(config.base_url);
    std::string key = config.api_key;
    return [origin, prefix, key](const std::string& body, std::chrono::milliseconds deadline) {
        httplib::Client client(origin);
        auto seconds = std::chrono::duration_cast<std::chrono::seconds>(deadline);
        auto micro = std::chrono::duration_cast<std::chrono::microseconds>(deadline - seconds);
        client.set_connection_timeout(seconds.count(), micro.count());
        client.set_read_timeout(seconds.count(), micro.count());
        client.set_write_timeout(seconds.count(), micro.count());
        httplib::Headers headers;
        if (!key.empty())
            headers.emplace("Authorization", "Bearer " + key);
        auto res = client.Post(prefix + "/chat/completions", headers, body, "application/json");
        HttpResult out;
        if (!res)
        {
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        return out;
    };
}

} // namespace deli::llm
