#pragma once

#include <map>
#include <memory>
#include <string>

#include "rpgfuzz/executor.hpp"

namespace rpgfuzz {

// Blocking HTTP/1.1 client. Timeouts and connection errors come back as
// status 0 (transport failure), never as exceptions.
class HttpTransport : public Transport {
public:
    HttpTransport(std::string base_url, int timeout_seconds,
                  std::map<std::string, std::string> static_headers);
    ~HttpTransport() override;

    RawResponse send(const ConcreteRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Serves a Transport over a loopback socket; used for manual smoke tests
// against the fixture. Blocks until the process is interrupted.
void serve_transport(Transport& transport, const std::string& host, int port);

}  // namespace rpgfuzz
