#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qpw/error.hpp"
#include "qpw/witness.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace qpw;

namespace {

QuiverWithPotential plain(int n, std::vector<Arrow> arrows) {
    return {build_quiver(n, std::move(arrows)), Potential()};
}

// Every theta in [-b, b]^n, ordered by (max-norm, lexicographic).
std::optional<Theta> oracle_theta(const DimVector& d, const std::vector<DimVector>& forbidden, int b) {
    const int n = static_cast<int>(d.size());
    std::vector<Theta> all;
    Theta t(n, -b);
    while (true) {
        all.push_back(t);
        int i = n - 1;
        while (i >= 0 && t[i] == b) t[i--] = -b;
        if (i < 0) break;
        ++t[i];
    }
    auto norm = [](const Theta& x) {
        int m = 0;
        for (int v : x) m = std::max(m, std::abs(v));
        return m;
    };
    std::stable_sort(all.begin(), all.end(), [&](const Theta& x, const Theta& y) { return norm(x) < norm(y); });
    for (const auto& x : all) {
        if (pairing(x, d) != 0) continue;
        if (std::all_of(forbidden.begin(), forbidden.end(), [&](const DimVector& e) { return pairing(x, e) <= -1; }))
            return x;
    }
    return std::nullopt;
}

// Thin-module stability straight from the definition: every successor-closed
// proper nonzero vertex set pairs negatively.
bool oracle_thin_stable(const Quiver& q, const Representation& m, const Theta& theta) {
    const int n = q.size();
    int support = 0;
    for (int v = 0; v < n; ++v)
        if (m.dims[v] > 0) support |= 1 << v;
    for (int mask = 1; mask < (1 << n); ++mask) {
        if ((mask & ~support) != 0 || mask == support) continue;
        bool closed = true;
        for (const auto& a : q.arrows())
            if ((mask >> a.src & 1) && !(mask >> a.tgt & 1) && !m.mats.at(a.id).is_zero()) closed = false;
        if (!closed) continue;
        int s = 0;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) s += theta[v];
        if (s >= 0) return false;
    }
    return true;
}

} // namespace

TEST_CASE("null roots of affine diagrams") {
    for (const auto& type : catalog_entries(9)) {
        if (type.kind != MutationTag::Affine) continue;
        CAPTURE(type.name());
        const ExchangeMatrix a = catalog_diagram(type);
        const DimVector d = null_root(type);
        int g = 0;
        for (int i = 0; i < a.size(); ++i) {
            int row = 2 * d[i];
            for (int j = 0; j < a.size(); ++j) row -= a(i, j) * d[j];
            CHECK(row == 0);
            CHECK(d[i] > 0);
            g = std::gcd(g, d[i]);
        }
        CHECK(g == 1);
        DimVector sorted = d;
        std::sort(sorted.begin(), sorted.end());
        if (type.series == 'A') CHECK(sorted == DimVector(d.size(), 1));
        if (type.series == 'D' && type.rank == 4) CHECK(sorted == DimVector{1, 1, 1, 1, 2});
        if (type.series == 'E' && type.rank == 6) CHECK(sorted == DimVector{1, 1, 1, 2, 2, 2, 3});
        if (type.series == 'E' && type.rank == 8) CHECK(sorted == DimVector{1, 2, 2, 3, 3, 4, 4, 5, 6});
    }
    CHECK_THROWS_AS(null_root(catalog_diagram({MutationTag::Dynkin, 'A', 3})), Error);
}

TEST_CASE("theta synthesis matches exhaustive search") {
    CHECK(synthesize_theta({1, 1}, {{0, 1}}) == Theta{1, -1});
    CHECK_THROWS_AS(synthesize_theta({1, 1}, {{0, 1}, {1, 0}}), Error);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + int(rng() % 2);
        DimVector d(n);
        for (auto& x : d) x = 1 + int(rng() % 2);
        std::vector<DimVector> forbidden;
        const int count = int(rng() % 4);
        for (int c = 0; c < count; ++c) {
            DimVector e(n);
            for (int i = 0; i < n; ++i) e[i] = int(rng() % (d[i] + 1));
            if (e == d || std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) continue;
            forbidden.push_back(e);
        }
        const int b = 2 * n;
        const auto expect = oracle_theta(d, forbidden, b);
        CAPTURE(trial);
        if (expect) {
            CHECK(synthesize_theta(d, forbidden) == *expect);
        } else {
            CHECK_THROWS_AS(synthesize_theta(d, forbidden), Error);
        }
    }
}

TEST_CASE("defect theta of the Kronecker quiver") {
    auto k2 = build_quiver(2, {{"a", 0, 1}, {"b", 0, 1}});
    CHECK(defect_theta(k2, {1, 1}) == Theta{1, -1});
    CHECK(pairing(defect_theta(k2, {1, 1}), {1, 1}) == 0);
}

TEST_CASE("Kronecker family") {
    auto f = build_family_kronecker(3, 5);
    CHECK(f.instances.size() == 5);
    CHECK(f.d == DimVector{1, 1});
    CHECK(f.theta == Theta{1, -1});
    for (const auto& inst : f.instances) CHECK(oracle_thin_stable(f.core, inst.rep, f.theta));

    auto k2 = build_quiver(2, {{"a", 0, 1}, {"b", 0, 1}});
    CHECK_THROWS_AS(build_family_kronecker(k2, std::vector<Rational>{0, 1}), Error);
    CHECK_THROWS_AS(build_family_kronecker(k2, std::vector<Rational>{2, 2}), Error);
    CHECK_THROWS_AS(build_family_kronecker(1, 3), Error);

    // Reversed orientation puts the source at vertex 2.
    auto rev = build_quiver(2, {{"a", 1, 0}, {"b", 1, 0}});
    CHECK(build_family_kronecker(rev, 3).theta == Theta{-1, 1});
}

TEST_CASE("affine A family on cycles") {
    const std::vector<std::vector<Arrow>> cycles = {
        {{"a", 0, 1}, {"b", 2, 1}, {"c", 2, 3}, {"d", 0, 3}}, // two sources, two sinks
        {{"a", 0, 1}, {"b", 1, 2}, {"c", 0, 3}, {"d", 3, 2}}, // one source, one sink
        {{"a", 0, 1}, {"b", 1, 2}, {"c", 0, 2}},
        {{"a", 0, 1}, {"b", 1, 2}, {"c", 2, 3}, {"d", 3, 4}, {"e", 0, 4}},
    };
    for (const auto& arrows : cycles) {
        const int n = static_cast<int>(arrows.size());
        auto q = build_quiver(n, arrows);
        auto f = build_family_affine_A(q, 4);
        CHECK(f.instances.size() == 4);
        CHECK(f.d == DimVector(n, 1));
        CHECK(pairing(f.theta, f.d) == 0);
        for (const auto& inst : f.instances) CHECK(oracle_thin_stable(q, inst.rep, f.theta));
    }
    auto oriented = build_quiver(3, {{"a", 0, 1}, {"b", 1, 2}, {"c", 2, 0}});
    CHECK_THROWS_AS(build_family_affine_A(oriented, 3), Error);
    auto path = build_quiver(3, {{"a", 0, 1}, {"b", 1, 2}});
    CHECK_THROWS_AS(build_family_affine_A(path, 3), Error);
}

TEST_CASE("lift by zero extension") {
    auto target = plain(3, {{"a", 0, 1}, {"b", 0, 1}, {"c", 1, 2}});
    auto core = full_subquiver(target.quiver, std::vector<int>{0, 1});
    auto f = build_family_kronecker(core, 3);
    auto lifted = lift(f, {0, 1}, target);
    CHECK(lifted.theta == Theta{1, -1, 0});
    CHECK(lifted.pairwise_hom_zero);
    REQUIRE(lifted.instances.size() == 3);
    for (const auto& li : lifted.instances) {
        CHECK(li.rep.dims == DimVector{1, 1, 0});
        CHECK(li.module_ok);
        CHECK(li.stable);
        CHECK(li.brick);
        CHECK(oracle_thin_stable(target.quiver, li.rep, lifted.theta));
    }
}

TEST_CASE("Kronecker evidence counts over small fields") {
    auto k2 = plain(2, {{"a", 0, 1}, {"b", 0, 1}});
    auto ev = evidence_enumeration(k2, {1, 1}, {1, -1}, {Field::F2, Field::F3, Field::F5});
    REQUIRE(ev.counts.size() == 3);
    const int primes[] = {2, 3, 5};
    for (int i = 0; i < 3; ++i) {
        const int p = primes[i];
        CAPTURE(p);
        // Points of the projective line, and those off {0, infinity}.
        CHECK(ev.counts[i].all_classes == p + 1);
        CHECK(ev.counts[i].classes == p - 1);
        CHECK(ev.counts[i].examined == std::size_t(p * p));
        CHECK(int(ev.representatives[i].size()) == p - 1);
    }
    CHECK_THROWS_AS(evidence_enumeration(k2, {1, 1}, {1, 0}, {Field::F2}), Error);
}

TEST_CASE("witness certificates end to end") {
    std::vector<std::string> progress;
    WitnessOptions opt;
    opt.progress = [&](const std::string& s) { progress.push_back(s); };

    auto k3 = plain(2, {{"a", 0, 1}, {"b", 0, 1}, {"c", 0, 1}});
    auto c = run_witness(k3, opt);
    CHECK(c.status == WitnessStatus::Witness);
    CHECK(c.core == std::vector<int>{0, 1});
    CHECK(c.core_type == "K_3");
    REQUIRE(c.lifted);
    CHECK(c.lifted->instances.size() == 5);
    CHECK(!progress.empty());
    CHECK(c.digest == run_witness(k3).digest);

    auto ext = plain(3, {{"a", 0, 1}, {"b", 0, 1}, {"c", 1, 2}});
    c = run_witness(ext);
    CHECK(c.status == WitnessStatus::Witness);
    CHECK(c.core == std::vector<int>{0, 1});
    CHECK(c.lifted->theta == Theta{1, -1, 0});
    CHECK(c.digest != run_witness(k3).digest);

    auto square = plain(4, {{"a", 0, 1}, {"b", 2, 1}, {"c", 2, 3}, {"d", 0, 3}});
    c = run_witness(square);
    CHECK(c.status == WitnessStatus::Witness);
    CHECK(c.core_type == "Affine A_3^(1)");
    CHECK(c.lifted->instances.size() == 5);
    CHECK(!c.caveats.empty());

    QuiverWithPotential tri{build_quiver(3, {{"a", 0, 1}, {"b", 1, 2}, {"c", 2, 0}}), Potential()};
    tri.potential.add_cycle(tri.quiver, {"a", "b", "c"}, 1);
    c = run_witness(tri);
    CHECK(c.status == WitnessStatus::DynkinNoWitness);
    CHECK(c.classification->name() == "Dynkin A_3");

    auto markov = plain(3, {{"a1", 0, 1}, {"a2", 0, 1}, {"b1", 1, 2}, {"b2", 1, 2}, {"c1", 2, 0}, {"c2", 2, 0}});
    c = run_witness(markov);
    CHECK(c.status == WitnessStatus::Refused);
    CHECK(!c.jacobian.finite());

    QuiverWithPotential two{build_quiver(2, {{"a", 0, 1}, {"b", 1, 0}}), Potential()};
    two.potential.add_cycle(two.quiver, {"a", "b"}, 1);
    CHECK(run_witness(two).status == WitnessStatus::Refused);
}

TEST_CASE("D4 affine core uses finite-field evidence") {
    auto star = plain(5, {{"a", 1, 0}, {"b", 2, 0}, {"c", 3, 0}, {"d", 4, 0}});
    auto c = run_witness(star);
    CHECK(c.core_type == "Affine D_4^(1)");
    REQUIRE(c.family);
    CHECK(c.family->kind == FamilyKind::EvidenceEnumeration);
    CHECK(c.family->d == DimVector{2, 1, 1, 1, 1});
    REQUIRE(c.family->evidence);
    const auto& counts = c.family->evidence->counts;
    REQUIRE(counts.size() == 3);
    // Homogeneous tubes: the projective line minus the three exceptional points.
    CHECK(counts[0].all_classes == 0);
    CHECK(counts[1].all_classes == 1);
    CHECK(counts[2].skipped);
    CHECK(c.status == WitnessStatus::Witness);
    CHECK(c.lifted->instances.size() == 3);
}
