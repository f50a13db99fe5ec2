#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qpw/error.hpp"
#include "qpw/quiver.hpp"
#include "support.hpp"

using namespace qpw;
using qpw::testing::oracle_canonical;
using qpw::testing::oracle_mutate;
using qpw::testing::random_exchange_matrix;
using qpw::testing::random_permutation;

namespace {

Quiver triangle() {
    return build_quiver(3, {{"a", 0, 1}, {"b", 1, 2}, {"c", 2, 0}});
}

Quiver linear_a3() {
    return build_quiver(ExchangeMatrix::from_rows({{0, 1, 0}, {-1, 0, 1}, {0, -1, 0}}));
}

int count_arrows(const Quiver& q, int src, int tgt) {
    return static_cast<int>(q.arrows_from_to(src, tgt).size());
}

} // namespace

TEST_CASE("build from matrix and from arrows") {
    Quiver k2 = build_quiver(ExchangeMatrix::from_rows({{0, 2}, {-2, 0}}));
    CHECK(k2.arrows().size() == 2);
    CHECK(count_arrows(k2, 0, 1) == 2);
    CHECK(k2.arrows()[0].id == "a1_2_1");

    Quiver t = triangle();
    CHECK(t.b().rows() == std::vector<std::vector<int>>{{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});
    CHECK(t.labels() == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("build rejects bad input") {
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Internal;
    };
    CHECK(code_of([] { build_quiver(ExchangeMatrix::from_rows({{0, 1}, {1, 0}})); }) == ErrorCode::NotSkewSymmetric);
    CHECK(code_of([] { build_quiver(2, {{"x", 0, 0}}); }) == ErrorCode::Loop);
    CHECK(code_of([] { build_quiver(2, {{"x", 0, 1}, {"y", 1, 0}}, {}, true); }) == ErrorCode::TwoCycle);
    CHECK(code_of([] { build_quiver(2, {{"x", 0, 1}, {"x", 0, 1}}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { build_quiver(2, {{"x", 0, 5}}); }) == ErrorCode::OutOfRange);
}

TEST_CASE("mutation examples") {
    Quiver m = mutate(linear_a3(), 1);
    CHECK(count_arrows(m, 1, 0) == 1);
    CHECK(count_arrows(m, 2, 1) == 1);
    CHECK(count_arrows(m, 0, 2) == 1);
    CHECK(m.arrows().size() == 3);

    Quiver t = mutate(triangle(), 0);
    CHECK(t.arrows().size() == 2);
    CHECK(count_arrows(t, 1, 0) == 1);
    CHECK(count_arrows(t, 0, 2) == 1);

    Quiver k2 = build_quiver(ExchangeMatrix::from_rows({{0, 2}, {-2, 0}}));
    Quiver r = mutate(k2, 0);
    CHECK(count_arrows(r, 1, 0) == 2);
    CHECK(mutate(r, 0).b() == k2.b());
}

TEST_CASE("mutation errors") {
    CHECK_THROWS_AS(mutate(triangle(), 3), Error);
    Quiver two = build_quiver(3, {{"x", 0, 1}, {"y", 1, 0}, {"z", 1, 2}});
    try {
        mutate(two, 2);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TwoCycle);
    }
}

TEST_CASE("matrix mutation agrees with the max form and is an involution") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        ExchangeMatrix b = random_exchange_matrix(rng, n, 3);
        for (int k = 0; k < n; ++k) {
            ExchangeMatrix m = mutate_matrix(b, k);
            REQUIRE(m == oracle_mutate(b, k));
            REQUIRE(m.is_skew_symmetric());
            REQUIRE(mutate_matrix(m, k) == b);
        }
    }
}

TEST_CASE("full subquiver") {
    Quiver sub = full_subquiver(triangle(), std::vector<int>{0, 1});
    CHECK(sub.size() == 2);
    REQUIRE(sub.arrows().size() == 1);
    CHECK(sub.arrows()[0].id == "a");
    CHECK(sub.labels() == std::vector<std::string>{"1", "2"});

    Quiver t = triangle();
    CHECK(full_subquiver(t, std::vector<int>{0, 1, 2}) == t);
    CHECK_THROWS_AS(full_subquiver(t, std::vector<int>{0, 7}), Error);
}

TEST_CASE("full subquiver commutes with relabeling") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + static_cast<int>(rng() % 5);
        ExchangeMatrix b = random_exchange_matrix(rng, n, 2);
        auto perm = random_permutation(rng, n);
        ExchangeMatrix rb = relabel(b, perm);
        std::vector<int> subset, image;
        for (int v = 0; v < n; ++v)
            if (rng() % 2) subset.push_back(v);
        for (int v : subset) image.push_back(perm[v]);
        std::sort(image.begin(), image.end());
        auto lhs = full_subquiver(build_quiver(b), subset).b();
        auto rhs = full_subquiver(build_quiver(rb), image).b();
        CHECK(canonical_form(lhs).matrix == canonical_form(rhs).matrix);
    }
}

TEST_CASE("connectivity and acyclicity") {
    CHECK(is_connected(triangle()));
    CHECK(is_connected(linear_a3()));
    CHECK_FALSE(is_connected(build_quiver(ExchangeMatrix(2))));
    CHECK(is_acyclic(linear_a3()));
    CHECK_FALSE(is_acyclic(triangle()));
}

TEST_CASE("canonical form examples") {
    auto fwd = build_quiver(ExchangeMatrix::from_rows({{0, 1}, {-1, 0}}));
    auto bwd = build_quiver(ExchangeMatrix::from_rows({{0, -1}, {1, 0}}));
    CHECK(canonical_form(fwd).matrix == canonical_form(bwd).matrix);
    CHECK(canonical_form(triangle()).matrix != canonical_form(linear_a3()).matrix);

    auto cf = canonical_form(triangle());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(cf.matrix(i, j) == triangle().b(cf.permutation[i], cf.permutation[j]));
    CHECK_THROWS_AS(canonical_form(ExchangeMatrix(10)), Error);
}

TEST_CASE("canonical form is a complete relabeling invariant") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        ExchangeMatrix a = random_exchange_matrix(rng, n, 1);
        ExchangeMatrix b = trial % 2 ? relabel(a, random_permutation(rng, n)) : random_exchange_matrix(rng, n, 1);
        bool iso = oracle_canonical(a) == oracle_canonical(b);
        bool same = canonical_form(a).matrix == canonical_form(b).matrix;
        REQUIRE(iso == same);
    }
}

TEST_CASE("canonical form handles symmetric diagrams with many automorphisms") {
    std::mt19937_64 rng(17);
    ExchangeMatrix cycle(9);
    for (int i = 0; i < 9; ++i) {
        cycle(i, (i + 1) % 9) = 1;
        cycle((i + 1) % 9, i) = 1;
    }
    auto ref = canonical_form(cycle).matrix;
    for (int t = 0; t < 20; ++t) CHECK(canonical_form(relabel(cycle, random_permutation(rng, 9))).matrix == ref);
}
