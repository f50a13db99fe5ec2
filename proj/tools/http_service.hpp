#pragma once

// HTTP/JSON facade over the C API: mutation sessions, classification and
// witness runs. Response bodies are the CLI documents, byte for byte.

#include "qpw/qpw.h"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace qpw_http {

/// 400 malformed input, 404 unknown session, 409 2-cycle, 422 other domain
/// errors, 500 internal.
int http_status(qpw_status s);

class Service {
public:
    /// state_dir may be empty for an in-memory session store.
    explicit Service(const std::string& state_dir = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds without serving; port 0 picks a free port. Returns the bound
    /// port, or -1 on failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(); returns false if the server failed.
    bool run();
    void stop();
    /// Blocks until run() is accepting connections.
    void wait_until_ready() const;

private:
    void routes();

    qpw_session_store* store_ = nullptr;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace qpw_http
