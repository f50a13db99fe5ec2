// HTTP facade, in process, plus byte-for-byte comparison with the CLI.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "http_service.hpp"

#include "httplib.h"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

using json = nlohmann::json;

namespace {

const char* kTriangle =
    R"({"n":3,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":2,"tgt":3},{"id":"c","src":3,"tgt":1}],)"
    R"("potential":[{"coef":"1","cycle":["a","b","c"]}],"truncation":6})";
const char* kTriangleZero =
    R"({"n":3,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":2,"tgt":3},{"id":"c","src":3,"tgt":1}]})";
const char* kK3 = R"({"n":2,"b":[[0,3],[-3,0]]})";

// Service on a free port, served from a background thread.
struct Running {
    explicit Running(const std::string& dir = {}) : service(dir) {
        port = service.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        thread = std::thread([this] { service.run(); });
        service.wait_until_ready();
    }
    ~Running() {
        service.stop();
        thread.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(60, 0);
        return c;
    }
    qpw_http::Service service;
    int port = 0;
    std::thread thread;
};

std::string run_cli(const std::string& args) {
    std::string out;
    FILE* f = popen((std::string(QPW_CLI_PATH) + " " + args).c_str(), "r");
    REQUIRE(f != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    pclose(f);
    return out;
}

std::filesystem::path scratch(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("qpw_service_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("session lifecycle over HTTP") {
    Running srv;
    auto cli = srv.client();
    auto r = cli.Post("/api/session", kTriangle, "application/json");
    REQUIRE(r);
    CHECK(r->status == 201);
    const json created = json::parse(r->body);
    const std::string id = created["id"];
    CHECK(created["badge"] == "Dynkin A_3");

    r = cli.Get("/api/session/" + id);
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(json::parse(r->body)["badge"] == "Dynkin A_3");

    r = cli.Post("/api/session/" + id + "/mutate", R"({"k":3,"mode":"qp"})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
    json v = json::parse(r->body);
    CHECK(v["qp"]["potential"].empty());
    CHECK(v["qp"]["arrows"].size() == 2);
    CHECK(v["badge"] == "Dynkin A_3");

    r = cli.Post("/api/session/" + id + "/undo", "", "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(json::parse(r->body)["qp"].dump() == created["qp"].dump());

    r = cli.Post("/api/session/" + id + "/redo", "", "application/json");
    CHECK(json::parse(r->body)["cursor"] == 1);
}

TEST_CASE("HTTP error mapping") {
    Running srv;
    auto cli = srv.client();
    auto r = cli.Get("/api/session/doesnotexist");
    CHECK(r->status == 404);
    CHECK(json::parse(r->body)["error"] == "not_found");

    r = cli.Post("/api/session", "{broken", "application/json");
    CHECK(r->status == 400);

    const std::string id = json::parse(cli.Post("/api/session", kTriangleZero, "application/json")->body)["id"];
    r = cli.Post("/api/session/" + id + "/mutate", R"({"mode":"qp"})", "application/json");
    CHECK(r->status == 400);
    r = cli.Post("/api/session/" + id + "/mutate", R"({"k":3,"mode":"qp"})", "application/json");
    REQUIRE(r->status == 200);
    const int on_cycle = json::parse(r->body)["twoCycles"]["vertices"][0];
    r = cli.Post("/api/session/" + id + "/mutate", json{{"k", on_cycle}, {"mode", "qp"}}.dump(), "application/json");
    CHECK(r->status == 409);
    CHECK(json::parse(r->body)["error"] == "two_cycle");

    r = cli.Post("/api/session/" + id + "/redo", "", "application/json");
    CHECK(r->status == 422);
    CHECK(json::parse(r->body)["error"] == "domain");

    r = cli.Post("/api/classify", R"({"n":2,"b":[[0,0],[0,0]]})", "application/json");
    CHECK(r->status == 422);
    CHECK(json::parse(r->body)["error"] == "disconnected");
}

TEST_CASE("CLI and HTTP documents are byte-identical") {
    Running srv;
    auto cli = srv.client();
    const auto dir = scratch("docs");
    std::filesystem::create_directories(dir);
    const auto tri = dir / "tri.json", k3 = dir / "k3.json";
    std::ofstream(tri) << kTriangle;
    std::ofstream(k3) << kK3;

    auto r = cli.Post("/api/classify", kTriangle, "application/json");
    REQUIRE(r->status == 200);
    CHECK(r->body == run_cli("classify " + tri.string()));

    r = cli.Post("/api/witness?k=5", kK3, "application/json");
    REQUIRE(r->status == 200);
    const std::string cli_cert = run_cli("witness -k 5 " + k3.string());
    CHECK(r->body == cli_cert);
    const json cert = json::parse(cli_cert);
    CHECK(cert["status"] == "witness");
    CHECK(cert["liftedInstances"].size() == 5);

    // Witness on a session's current QP.
    const std::string id = json::parse(cli.Post("/api/session", kK3, "application/json")->body)["id"];
    r = cli.Post("/api/witness", json{{"session", id}, {"k", 3}}.dump(), "application/json");
    REQUIRE(r->status == 200);
    CHECK(json::parse(r->body)["liftedInstances"].size() == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("concurrent requests keep per-session order") {
    Running srv;
    std::string ids[2];
    for (auto& id : ids)
        id = json::parse(srv.client().Post("/api/session", kTriangle, "application/json")->body)["id"];
    std::vector<std::thread> threads;
    for (int t = 0; t < 6; ++t)
        threads.emplace_back([&, t] {
            auto c = srv.client();
            for (int i = 0; i < 5; ++i) {
                const json body = {{"k", 1 + (t + i) % 3}, {"mode", "quiver"}};
                auto r = c.Post("/api/session/" + ids[t % 2] + "/mutate", body.dump(), "application/json");
                CHECK(r);
                if (r) CHECK(r->status == 200);
            }
        });
    for (auto& th : threads) th.join();
    for (const auto& id : ids) {
        auto r = srv.client().Get("/api/session/" + id);
        CHECK(json::parse(r->body)["history"].size() == 15);
    }
}

TEST_CASE("sessions survive a restart with a state directory") {
    const auto dir = scratch("state");
    std::string id;
    json before;
    {
        Running srv(dir.string());
        auto c = srv.client();
        id = json::parse(c.Post("/api/session", kTriangle, "application/json")->body)["id"];
        c.Post("/api/session/" + id + "/mutate", R"({"k":2,"mode":"qp"})", "application/json");
        before = json::parse(c.Get("/api/session/" + id)->body);
    }
    Running again(dir.string());
    auto r = again.client().Get("/api/session/" + id);
    REQUIRE(r->status == 200);
    const json after = json::parse(r->body);
    CHECK(after["qp"] == before["qp"]);
    CHECK(after["history"] == before["history"]);
    std::filesystem::remove_all(dir);
}
