#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qpw/error.hpp"
#include "qpw/session.hpp"
#include "support.hpp"

#include <random>
#include <thread>

#include <unistd.h>

using namespace qpw;
using qpw::io::json;

namespace {

QuiverWithPotential triangle(bool with_potential) {
    QuiverWithPotential p{build_quiver(3, {{"a", 0, 1}, {"b", 1, 2}, {"c", 2, 0}}), Potential()};
    if (with_potential) p.potential.add_cycle(p.quiver, {"a", "b", "c"}, 1);
    return p;
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("qpw_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("quiver documents round trip") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + int(rng() % 6);
        Quiver q = build_quiver(testing::random_exchange_matrix(rng, n, 3));
        const std::string text = io::dump(io::quiver_to_json(q));
        CHECK(io::quiver_from_json(io::parse(text)) == q);
        // b alone rebuilds the same quiver.
        json only_b = {{"n", n}, {"b", q.b().rows()}};
        CHECK(io::quiver_from_json(only_b).b() == q.b());
    }
}

TEST_CASE("quiver documents are validated") {
    CHECK_THROWS_AS(io::parse("{\"n\": 2,"), Error);
    CHECK_THROWS_AS(io::quiver_from_json(json{{"b", {{0}}}}), Error);
    CHECK_THROWS_AS(io::quiver_from_json(json{{"n", 2}}), Error);
    CHECK_THROWS_AS(io::quiver_from_json(json{{"n", 2}, {"b", {{0, 1}, {1, 0}}}}), Error);
    CHECK_THROWS_AS(io::quiver_from_json(json{{"n", 2}, {"arrows", {{{"src", 1}, {"tgt", 3}}}}}), Error);
    CHECK_THROWS_AS(io::quiver_from_json(json{{"n", 2}, {"arrows", {{{"src", 1}, {"tgt", 1}}}}}), Error);
    json both = {{"n", 2}, {"b", {{0, 2}, {-2, 0}}}, {"arrows", {{{"id", "x"}, {"src", 1}, {"tgt", 2}}}}};
    CHECK_THROWS_AS(io::quiver_from_json(both), Error);
    try {
        io::quiver_from_json(json{{"n", "two"}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("QP and representation documents round trip") {
    auto p = triangle(true);
    p.potential.add_cycle(p.quiver, {"b", "c", "a", "b", "c", "a"}, Rational(3, 2));
    const auto text = io::dump(io::qp_to_json(p));
    CHECK(io::qp_from_json(io::parse(text)) == p);
    CHECK(text.find("\"3/2\"") != std::string::npos);

    auto j = io::parse(R"({"n":2,"arrows":[{"id":"a","src":1,"tgt":2}],"potential":[],"truncation":7})");
    auto q = io::qp_from_json(j);
    CHECK(q.potential.truncation() == 7);
    CHECK(q.potential.is_zero());

    Representation m{Field::F3, {1, 2}, {}};
    Matrix<Rational> a(2, 1);
    a(0, 0) = 2;
    a(1, 0) = 1;
    m.mats["a"] = a;
    CHECK(io::rep_from_json(io::rep_to_json(m)) == m);
    Representation r{Field::Q, {1, 1}, {}};
    Matrix<Rational> h(1, 1);
    h(0, 0) = Rational(-1, 2);
    r.mats["a"] = h;
    CHECK(io::rep_from_json(io::parse(io::dump(io::rep_to_json(r)))) == r);
    CHECK_THROWS_AS(io::rep_from_json(io::parse(R"({"field":"F7","dims":[1],"mats":{}})")), Error);
    CHECK_THROWS_AS(io::rep_from_json(io::parse(R"({"field":"Q","dims":[1,1],"mats":{"a":[[1],[1,2]]}})")), Error);
}

TEST_CASE("result documents") {
    auto tri = triangle(true);
    auto c = io::classification_to_json(classify(tri.quiver));
    CHECK(c["type"] == "Dynkin A_3");
    CHECK(c.contains("witnessSequence"));
    CHECK(c.contains("visited"));

    auto jac = io::jacobian_to_json(truncated_quotient(tri, 6));
    CHECK(jac["gradedDims"] == json({3, 3, 0}));
    CHECK(jac["status"] == "FiniteDim(6)");
    CHECK(jac["dim"] == 6);

    CHECK(io::parse_int_list("1,-1") == std::vector<int>{1, -1});
    CHECK_THROWS_AS(io::parse_int_list("1,x"), Error);
    CHECK_THROWS_AS(io::parse_int_list(""), Error);
}

TEST_CASE("session mutate undo redo") {
    SessionStore store;
    auto v = store.create(triangle(true));
    const std::string id = v["id"];
    CHECK(v["badge"] == "Dynkin A_3");
    CHECK(v["twoCycles"]["present"] == false);

    v = store.mutate(id, {MutationMode::QP, 2});
    CHECK(v["qp"]["potential"].empty());
    CHECK(is_acyclic(io::qp_from_json(v["qp"]).quiver));
    CHECK(v["canUndo"] == true);

    v = store.undo(id);
    CHECK(io::qp_from_json(v["qp"]) == triangle(true));
    CHECK(v["canRedo"] == true);
    v = store.redo(id);
    CHECK(v["cursor"] == 1);
    CHECK_THROWS_AS(store.redo(id), Error);

    CHECK_THROWS_AS(store.get("nope"), Error);
    CHECK_THROWS_AS(store.mutate(id, {MutationMode::QP, 7}), Error);
}

TEST_CASE("degenerate QP mutation leaves a 2-cycle and blocks further mutation there") {
    SessionStore store;
    const std::string id = store.create(triangle(false))["id"];
    auto v = store.mutate(id, {MutationMode::QP, 2});
    CHECK(v["twoCycles"]["present"] == true);
    CHECK(v["badge"] == "undefined (2-cycle)");
    const int on_cycle = v["twoCycles"]["vertices"][0].get<int>() - 1;
    try {
        store.mutate(id, {MutationMode::QP, on_cycle});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TwoCycle);
    }
    CHECK(store.get(id)["cursor"] == 1);
}

TEST_CASE("session replay is deterministic under random operation sequences") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 3 + int(rng() % 3);
        Quiver q = build_quiver(testing::random_exchange_matrix(rng, n, 1));
        QuiverWithPotential p{q, Potential(8)};
        // Add every oriented triangle so QP mode has something to work on.
        for (const auto& a : q.arrows())
            for (const auto& b : q.arrows())
                for (const auto& c : q.arrows())
                    if (a.tgt == b.src && b.tgt == c.src && c.tgt == a.src && a.id < b.id && a.id < c.id)
                        p.potential.add_cycle(q, {a.id, b.id, c.id}, 1 + int(rng() % 3));
        Session s("t", p);
        // Model: a plain stack of applied states.
        std::vector<QuiverWithPotential> model{p};
        std::vector<QuiverWithPotential> redo;
        for (int step = 0; step < 12; ++step) {
            const int action = int(rng() % 4);
            if (action == 0 && s.can_undo()) {
                s.undo();
                redo.push_back(model.back());
                model.pop_back();
            } else if (action == 1 && s.can_redo()) {
                s.redo();
                model.push_back(redo.back());
                redo.pop_back();
            } else {
                SessionOp op{rng() % 2 ? MutationMode::QP : MutationMode::Quiver, int(rng() % n)};
                try {
                    s.mutate(op);
                } catch (const Error&) {
                    continue;
                }
                model.push_back(apply_op(model.back(), op));
                redo.clear();
            }
            REQUIRE(s.current() == model.back());
            REQUIRE(s.replay() == s.current());
        }
    }
}

TEST_CASE("sessions persist to a state directory") {
    const auto dir = temp_dir("state");
    std::string id;
    json before;
    {
        SessionStore store(dir);
        id = store.create(triangle(true))["id"];
        store.mutate(id, {MutationMode::QP, 2});
        store.mutate(id, {MutationMode::Quiver, 0});
        before = store.undo(id);
    }
    SessionStore reloaded(dir);
    CHECK(reloaded.size() == 1);
    auto after = reloaded.get(id);
    CHECK(after["qp"] == before["qp"]);
    CHECK(after["cursor"] == before["cursor"]);
    CHECK(after["history"] == before["history"]);
    CHECK(after["createdAt"] == before["createdAt"]);
    std::filesystem::remove_all(dir);
}

TEST_CASE("concurrent mutations of one session are serialized") {
    SessionStore store;
    auto p = triangle(true);
    const std::string id = store.create(p)["id"];
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            for (int i = 0; i < 10; ++i) store.mutate(id, {MutationMode::Quiver, (t + i) % 3});
        });
    for (auto& th : threads) th.join();
    store.with_session(id, [](const Session& s) {
        CHECK(s.history().size() == 40);
        CHECK(s.replay() == s.current());
        return 0;
    });
}
