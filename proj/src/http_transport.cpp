#include "rpgfuzz/http_transport.hpp"

#include <chrono>

#include "httplib.h"

namespace rpgfuzz {

struct HttpTransport::Impl {
    httplib::Client client;
    std::map<std::string, std::string> static_headers;

    Impl(const std::string& base_url, int timeout_seconds,
         std::map<std::string, std::string> headers)
        : client(base_url), static_headers(std::move(headers)) {
        client.set_connection_timeout(timeout_seconds, 0);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_write_timeout(timeout_seconds, 0);
        client.set_keep_alive(true);
    }
};

HttpTransport::HttpTransport(std::string base_url, int timeout_seconds,
                             std::map<std::string, std::string> static_headers)
    : impl_(std::make_unique<Impl>(base_url, timeout_seconds, std::move(static_headers))) {}

HttpTransport::~HttpTransport() = default;

RawResponse HttpTransport::send(const ConcreteRequest& request) {
    httplib::Headers headers;
    for (const auto& [k, v] : impl_->static_headers) headers.emplace(k, v);
    for (const auto& [k, v] : request.headers) {
        if (k != "Content-Type") headers.emplace(k, v);
    }
    const std::string target = request.url_with_query();
    const std::string body = request.body ? request.body->dump() : "";
    const char* content_type = "application/json";

    const auto started = std::chrono::steady_clock::now();
    httplib::Result result;
    switch (request.method) {
        case HttpMethod::Post:
            result = impl_->client.Post(target, headers, body, content_type);
            break;
        case HttpMethod::Put:
            result = impl_->client.Put(target, headers, body, content_type);
            break;
        case HttpMethod::Delete:
            result = request.body
                         ? impl_->client.Delete(target, headers, body, content_type)
                         : impl_->client.Delete(target, headers);
            break;
        case HttpMethod::Get:
        default: result = impl_->client.Get(target, headers); break;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    RawResponse response;
    response.latency_ms = elapsed;
    if (!result) {
        response.status = 0;  // transport failure; the caller never hangs
        response.body = httplib::to_string(result.error());
        return response;
    }
    response.status = result->status;
    response.body = result->body;
    for (const auto& [k, v] : result->headers) response.headers[k] = v;
    return response;
}

void serve_transport(Transport& transport, const std::string& host, int port) {
    httplib::Server server;
    auto handler = [&transport](const httplib::Request& req, httplib::Response& res) {
        ConcreteRequest request;
        if (req.method == "POST") request.method = HttpMethod::Post;
        else if (req.method == "PUT") request.method = HttpMethod::Put;
        else if (req.method == "DELETE") request.method = HttpMethod::Delete;
        else request.method = HttpMethod::Get;
        request.url = req.path;
        for (const auto& [k, v] : req.params) request.query[k] = v;
        if (!req.body.empty()) {
            Json parsed = Json::parse(req.body, nullptr, false);
            if (!parsed.is_discarded()) request.body = std::move(parsed);
        }
        RawResponse raw = transport.send(request);
        res.status = raw.status == 0 ? 502 : raw.status;
        auto it = raw.headers.find("Content-Type");
        res.set_content(raw.body, it != raw.headers.end() ? it->second.c_str()
                                                          : "application/json");
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.listen(host, port);
}

}  // namespace rpgfuzz
