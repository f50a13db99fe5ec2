#include "http_service.hpp"

#include "httplib.h"
#include "json.hpp"

#include <stdexcept>

namespace qpw_http {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

// Owns a string returned by the C API.
struct CString {
    char* p = nullptr;
    ~CString() { qpw_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

void send_error(httplib::Response& res, int code, const std::string& error, const std::string& message) {
    json body = {{"error", error}, {"message", message}};
    res.status = code;
    res.set_content(body.dump(2) + "\n", kJson);
}

void send(httplib::Response& res, qpw_status s, const CString& out, int ok_code = 200) {
    if (s != QPW_OK) {
        send_error(res, http_status(s), qpw_status_name(s), qpw_last_error());
        return;
    }
    res.status = ok_code;
    res.set_content(out.str(), kJson);
}

int query_int(const httplib::Request& req, const char* key, int fallback) {
    if (!req.has_param(key)) return fallback;
    return std::stoi(req.get_param_value(key));
}

} // namespace

int http_status(qpw_status s) {
    switch (s) {
    case QPW_OK: return 200;
    case QPW_INVALID_ARGUMENT: return 400;
    case QPW_NOT_FOUND: return 404;
    case QPW_TWO_CYCLE: return 409;
    case QPW_INTERNAL: return 500;
    default: return 422;
    }
}

Service::Service(const std::string& state_dir) : server_(std::make_unique<httplib::Server>()) {
    if (qpw_session_store_open(state_dir.empty() ? nullptr : state_dir.c_str(), &store_) != QPW_OK)
        throw std::runtime_error(std::string("cannot open session store: ") + qpw_last_error());
    routes();
}

Service::~Service() {
    stop();
    qpw_session_store_close(store_);
}

int Service::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

void Service::wait_until_ready() const { server_->wait_until_ready(); }

void Service::routes() {
    auto& s = *server_;

    s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, "invalid_argument", e.what());
        } catch (const std::out_of_range& e) {
            send_error(res, 400, "invalid_argument", e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "invalid_argument", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
        }
    });

    s.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
        json body = {{"status", "ok"}, {"version", qpw_version()}};
        res.set_content(body.dump(2) + "\n", kJson);
    });

    s.Post("/api/session", [this](const httplib::Request& req, httplib::Response& res) {
        CString out;
        send(res, qpw_session_create(store_, req.body.c_str(), &out.p), out, 201);
    });

    s.Get(R"(/api/session/([0-9a-zA-Z_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
        CString out;
        send(res, qpw_session_get(store_, req.matches[1].str().c_str(), &out.p), out);
    });

    s.Post(R"(/api/session/([0-9a-zA-Z_-]+)/mutate)", [this](const httplib::Request& req, httplib::Response& res) {
        const json body = json::parse(req.body);
        if (!body.is_object() || !body.contains("k") || !body["k"].is_number_integer()) {
            send_error(res, 400, "invalid_argument", "body must be {\"k\": int, \"mode\": \"quiver\"|\"qp\"}");
            return;
        }
        const std::string mode = body.value("mode", std::string("qp"));
        CString out;
        send(res, qpw_session_mutate(store_, req.matches[1].str().c_str(), body["k"].get<int>(), mode.c_str(), &out.p),
             out);
    });

    s.Post(R"(/api/session/([0-9a-zA-Z_-]+)/undo)", [this](const httplib::Request& req, httplib::Response& res) {
        CString out;
        send(res, qpw_session_undo(store_, req.matches[1].str().c_str(), &out.p), out);
    });

    s.Post(R"(/api/session/([0-9a-zA-Z_-]+)/redo)", [this](const httplib::Request& req, httplib::Response& res) {
        CString out;
        send(res, qpw_session_redo(store_, req.matches[1].str().c_str(), &out.p), out);
    });

    s.Post("/api/classify", [](const httplib::Request& req, httplib::Response& res) {
        CString out;
        send(res, qpw_classify_json(req.body.c_str(), &out.p), out);
    });

    // Body is a QP document, or {"session": id} to use a session's current QP.
    s.Post("/api/witness", [this](const httplib::Request& req, httplib::Response& res) {
        qpw_witness_options opt;
        qpw_witness_options_init(&opt);
        opt.k = query_int(req, "k", opt.k);
        opt.seed = static_cast<uint64_t>(query_int(req, "seed", static_cast<int>(opt.seed)));
        std::string qp = req.body;
        const json body = json::parse(req.body);
        if (body.is_object() && body.contains("session")) {
            CString view;
            const qpw_status st = qpw_session_get(store_, body["session"].get<std::string>().c_str(), &view.p);
            if (st != QPW_OK) {
                send(res, st, view);
                return;
            }
            qp = json::parse(view.str())["qp"].dump();
            if (body.contains("k")) opt.k = body["k"].get<int>();
        }
        CString out;
        send(res, qpw_witness_json(qp.c_str(), &opt, &out.p), out);
    });
}

} // namespace qpw_http
