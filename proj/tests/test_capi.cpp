// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qpw/qpw.h"

#include "json.hpp"

#include <string>
#include <thread>
#include <vector>

using json = nlohmann::json;

namespace {

const char* kTriangle =
    R"({"n":3,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":2,"tgt":3},{"id":"c","src":3,"tgt":1}],)"
    R"("potential":[{"coef":"1","cycle":["a","b","c"]}],"truncation":6})";
const char* kTriangleZero =
    R"({"n":3,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":2,"tgt":3},{"id":"c","src":3,"tgt":1}]})";
const char* kKronecker = R"({"n":2,"arrows":[{"id":"alpha","src":1,"tgt":2},{"id":"beta","src":1,"tgt":2}]})";

// Calls fn(&out), expects QPW_OK, returns the parsed document.
template <class Fn>
json ok(Fn&& fn) {
    char* out = nullptr;
    const qpw_status s = fn(&out);
    INFO(qpw_last_error());
    REQUIRE(s == QPW_OK);
    REQUIRE(out != nullptr);
    json j = json::parse(out);
    qpw_string_free(out);
    return j;
}

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(qpw_version()).size() > 0);
    CHECK(std::string(qpw_status_name(QPW_OK)) == "ok");
    CHECK(std::string(qpw_status_name(QPW_TWO_CYCLE)) == "two_cycle");
    CHECK(std::string(qpw_status_name(QPW_SIZE_GUARD)) == "size_guard");
}

TEST_CASE("QP handles") {
    qpw_qp* tri = nullptr;
    REQUIRE(qpw_qp_parse(kTriangle, &tri) == QPW_OK);
    CHECK(qpw_qp_vertex_count(tri) == 3);
    qpw_qp* mutated = nullptr;
    REQUIRE(qpw_qp_mutate(tri, 3, &mutated) == QPW_OK);
    auto j = ok([&](char** o) { return qpw_qp_to_json(mutated, o); });
    CHECK(j["potential"].empty());
    CHECK(j["arrows"].size() == 2);
    CHECK(qpw_qp_mutate(tri, 0, &mutated) == QPW_OUT_OF_RANGE);
    qpw_qp_free(mutated);
    qpw_qp_free(tri);
    qpw_qp_free(nullptr);
}

TEST_CASE("errors are reported through status and message") {
    qpw_qp* p = nullptr;
    CHECK(qpw_qp_parse("{not json", &p) == QPW_INVALID_ARGUMENT);
    CHECK(std::string(qpw_last_error()).find("JSON") != std::string::npos);
    CHECK(p == nullptr);
    CHECK(qpw_qp_parse(nullptr, &p) == QPW_INVALID_ARGUMENT);
    char* out = nullptr;
    CHECK(qpw_mutate_json(kTriangle, 99, &out) == QPW_OUT_OF_RANGE);
    CHECK(out == nullptr);
    CHECK(qpw_classify_json(R"({"n":2,"b":[[0,0],[0,0]]})", &out) == QPW_DISCONNECTED);
    CHECK(qpw_classify_json(R"({"n":2,"b":[[0,1],[1,0]]})", &out) == QPW_NOT_SKEW_SYMMETRIC);
    CHECK(qpw_qp_mutate_json(kTriangle, 1, nullptr) == QPW_INVALID_ARGUMENT);
}

TEST_CASE("last error is per thread") {
    char* out = nullptr;
    CHECK(qpw_mutate_json(kTriangle, 99, &out) == QPW_OUT_OF_RANGE);
    const std::string mine = qpw_last_error();
    std::thread([] {
        char* o = nullptr;
        qpw_qp* p = nullptr;
        CHECK(qpw_qp_parse("[", &p) == QPW_INVALID_ARGUMENT);
        CHECK(qpw_classify_json(kKronecker, &o) == QPW_OK);
        qpw_string_free(o);
    }).join();
    CHECK(std::string(qpw_last_error()) == mine);
}

TEST_CASE("document operations") {
    auto c = ok([](char** o) { return qpw_classify_json(kTriangle, o); });
    CHECK(c["type"] == "Dynkin A_3");
    c = ok([](char** o) { return qpw_classify_json(kKronecker, o); });
    CHECK(c["type"] == "Affine A_1^(1)");

    auto m = ok([](char** o) { return qpw_mutate_json(kKronecker, 1, o); });
    CHECK(m["b"] == json({{0, -2}, {2, 0}}));

    auto jac = ok([](char** o) { return qpw_jacobian_json(kTriangle, 0, o); });
    CHECK(jac["status"] == "FiniteDim(6)");
    CHECK(jac["gradedDims"] == json({3, 3, 0}));
    auto two = ok([](char** o) {
        return qpw_jacobian_json(R"({"n":2,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":2,"tgt":1}]})", 8,
                                 o);
    });
    CHECK(two["status"] == "UndeterminedAtTruncation(8)");

    const int theta[] = {1, -1};
    auto st = ok([&](char** o) {
        return qpw_stable_json(R"({"field":"Q","dims":[1,1],"mats":{"alpha":[[1]],"beta":[["1/2"]]}})", kKronecker,
                               theta, 2, o);
    });
    CHECK(st["stable"] == true);
    CHECK(st["brick"] == true);
    CHECK(st["simpleInWTheta"] == true);
    auto unst = ok([&](char** o) {
        return qpw_stable_json(R"({"field":"Q","dims":[1,1],"mats":{"alpha":[[0]],"beta":[[0]]}})", kKronecker, theta,
                               2, o);
    });
    CHECK(unst["stable"] == false);
    char* out = nullptr;
    CHECK(qpw_stable_json(R"({"field":"Q","dims":[1,1]})", kKronecker, theta, 1, &out) == QPW_INVALID_ARGUMENT);
}

TEST_CASE("E-invariant probe") {
    const int g[] = {1, -1};
    auto r = ok([&](char** o) { return qpw_einv_json(kKronecker, g, 2, 64, 7, o); });
    CHECK(r["diagonalMin"] == 1);
    CHECK(r["offDiagonalMin"] == 0);
    auto again = ok([&](char** o) { return qpw_einv_json(kKronecker, g, 2, 64, 7, o); });
    CHECK(again == r);
    char* out = nullptr;
    const int g3[] = {1, -1, 0};
    CHECK(qpw_einv_json(kTriangleZero, g3, 3, 4, 1, &out) == QPW_DOMAIN);
    CHECK(qpw_einv_json(kKronecker, g3, 3, 4, 1, &out) == QPW_INVALID_ARGUMENT);
}

TEST_CASE("witness with progress callback") {
    qpw_witness_options opt;
    qpw_witness_options_init(&opt);
    CHECK(opt.k == 5);
    std::vector<std::string> lines;
    opt.progress = [](const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); };
    opt.user = &lines;
    auto cert = ok([&](char** o) {
        return qpw_witness_json(R"({"n":2,"b":[[0,3],[-3,0]]})", &opt, o);
    });
    CHECK(cert["status"] == "witness");
    CHECK(cert["liftedInstances"].size() == 5);
    CHECK(cert["core"] == json({1, 2}));
    CHECK(!lines.empty());
    auto dyn = ok([](char** o) { return qpw_witness_json(kTriangle, nullptr, o); });
    CHECK(dyn["status"] == "dynkinNoWitness");
}

TEST_CASE("sessions") {
    qpw_session_store* store = nullptr;
    REQUIRE(qpw_session_store_open(nullptr, &store) == QPW_OK);
    auto v = ok([&](char** o) { return qpw_session_create(store, kTriangleZero, o); });
    const std::string id = v["id"];
    v = ok([&](char** o) { return qpw_session_mutate(store, id.c_str(), 3, "qp", o); });
    CHECK(v["twoCycles"]["present"] == true);
    const int on_cycle = v["twoCycles"]["vertices"][0];
    char* out = nullptr;
    CHECK(qpw_session_mutate(store, id.c_str(), on_cycle, "qp", &out) == QPW_TWO_CYCLE);
    CHECK(qpw_session_mutate(store, id.c_str(), 1, "sideways", &out) == QPW_INVALID_ARGUMENT);
    CHECK(qpw_session_get(store, "missing", &out) == QPW_NOT_FOUND);
    v = ok([&](char** o) { return qpw_session_undo(store, id.c_str(), o); });
    CHECK(v["cursor"] == 0);
    CHECK(qpw_session_undo(store, id.c_str(), &out) == QPW_DOMAIN);
    v = ok([&](char** o) { return qpw_session_redo(store, id.c_str(), o); });
    CHECK(v["cursor"] == 1);
    qpw_session_store_close(store);
}
