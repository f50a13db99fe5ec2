#include "qpw/einvariant.hpp"

#include "qpw/error.hpp"
#include "qpw/linalg.hpp"

#include <algorithm>
#include <limits>

namespace qpw {

std::vector<int> summands(const std::vector<int>& multiplicities) {
    std::vector<int> out;
    for (std::size_t v = 0; v < multiplicities.size(); ++v) {
        if (multiplicities[v] < 0) fail(ErrorCode::InvalidArgument, "negative multiplicity");
        for (int k = 0; k < multiplicities[v]; ++k) out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<int> hom_projectives(const TruncatedAlgebra& a, int i, int j) {
    const int n = a.qp().quiver.size();
    if (i < 0 || i >= n || j < 0 || j >= n) fail(ErrorCode::OutOfRange, "vertex out of range");
    return a.basis_between(j, i);
}

Presentation presentation_space(const GVector& g) {
    Presentation p{std::vector<int>(g.size(), 0), std::vector<int>(g.size(), 0)};
    for (std::size_t v = 0; v < g.size(); ++v) (g[v] > 0 ? p.p0[v] : p.p1[v]) = std::abs(g[v]);
    return p;
}

namespace {

void require_finite(const TruncatedAlgebra& a) {
    if (!a.certificate().finite())
        fail(ErrorCode::Domain, "E-invariants need a finite-dimensional Jacobian algebra; got " +
                                    a.certificate().name());
}

bool lies_in(const TruncatedAlgebra& a, const AlgebraElement& x, int src, int tgt) {
    for (const auto& [col, c] : x) {
        const Path& p = a.path(col);
        if (p.src != src || p.tgt != tgt || !a.is_basis_column(col)) return false;
    }
    return true;
}

// Coordinates of an element of e_src Λ e_tgt in the basis list.
void scatter(const AlgebraElement& x, const std::vector<int>& basis, int offset, Matrix<Rational>& m, int col) {
    for (const auto& [c, coef] : x) {
        auto it = std::lower_bound(basis.begin(), basis.end(), c);
        if (it == basis.end() || *it != c) fail(ErrorCode::Internal, "element outside its Hom space");
        m(offset + static_cast<int>(it - basis.begin()), col) = coef;
    }
}

} // namespace

TwoTermComplex make_complex(const TruncatedAlgebra& a, std::vector<int> p1, std::vector<int> p0,
                            std::vector<std::vector<AlgebraElement>> map) {
    require_finite(a);
    const std::size_t n = static_cast<std::size_t>(a.qp().quiver.size());
    if (p1.size() != n || p0.size() != n) fail(ErrorCode::InvalidArgument, "multiplicity vectors need one entry per vertex");
    auto rows = summands(p0), cols = summands(p1);
    if (map.size() != rows.size()) fail(ErrorCode::InvalidArgument, "map has the wrong number of rows");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (map[r].size() != cols.size()) fail(ErrorCode::InvalidArgument, "map has the wrong number of columns");
        for (std::size_t c = 0; c < cols.size(); ++c) {
            map[r][c] = a.normal_form(map[r][c]);
            if (!lies_in(a, map[r][c], rows[r], cols[c]))
                fail(ErrorCode::InvalidArgument, "map entry (" + std::to_string(r) + "," + std::to_string(c) +
                                                     ") is not in the right Hom space");
        }
    }
    return {&a, std::move(p1), std::move(p0), std::move(map)};
}

int e_pair(const TwoTermComplex& a1, const TwoTermComplex& a2) {
    if (!a1.algebra || a1.algebra != a2.algebra) fail(ErrorCode::InvalidArgument, "complexes over different algebras");
    const TruncatedAlgebra& a = *a1.algebra;
    require_finite(a);
    const auto P1 = summands(a1.p1), P0 = summands(a1.p0);
    const auto Q1 = summands(a2.p1), Q0 = summands(a2.p0);

    // Target: Hom(P^{-1}, Q^0), blocks (r', c) = e_{Q0[r']} Λ e_{P1[c]}.
    std::vector<std::vector<int>> tbasis(Q0.size() * P1.size());
    std::vector<int> toff(tbasis.size() + 1, 0);
    for (std::size_t r = 0; r < Q0.size(); ++r)
        for (std::size_t c = 0; c < P1.size(); ++c) {
            std::size_t k = r * P1.size() + c;
            tbasis[k] = a.basis_between(Q0[r], P1[c]);
            toff[k + 1] = toff[k] + static_cast<int>(tbasis[k].size());
        }
    const int target_dim = toff.back();
    if (target_dim == 0) return 0;

    std::vector<Matrix<Rational>> cols;
    auto add_column = [&](const std::vector<std::pair<std::size_t, AlgebraElement>>& blocks) {
        Matrix<Rational> col(target_dim, 1);
        for (const auto& [k, x] : blocks) scatter(x, tbasis[k], toff[k], col, 0);
        cols.push_back(std::move(col));
    };
    // s: P^0 -> Q^0, component (r', r) in e_{Q0[r']} Λ e_{P0[r]}; contributes s * x.
    for (std::size_t rp = 0; rp < Q0.size(); ++rp)
        for (std::size_t r = 0; r < P0.size(); ++r)
            for (int b : a.basis_between(Q0[rp], P0[r])) {
                AlgebraElement s{{b, Rational(1)}};
                std::vector<std::pair<std::size_t, AlgebraElement>> blocks;
                for (std::size_t c = 0; c < P1.size(); ++c) {
                    auto prod = a.multiply(s, a1.map[r][c]);
                    if (!prod.empty()) blocks.emplace_back(rp * P1.size() + c, std::move(prod));
                }
                add_column(blocks);
            }
    // t: P^{-1} -> Q^{-1}, component (c', c) in e_{Q1[c']} Λ e_{P1[c]}; contributes y * t.
    for (std::size_t cp = 0; cp < Q1.size(); ++cp)
        for (std::size_t c = 0; c < P1.size(); ++c)
            for (int b : a.basis_between(Q1[cp], P1[c])) {
                AlgebraElement t{{b, Rational(1)}};
                std::vector<std::pair<std::size_t, AlgebraElement>> blocks;
                for (std::size_t rp = 0; rp < Q0.size(); ++rp) {
                    auto prod = a.multiply(a2.map[rp][cp], t);
                    if (!prod.empty()) blocks.emplace_back(rp * P1.size() + c, std::move(prod));
                }
                add_column(blocks);
            }
    const int source_dim = static_cast<int>(cols.size());
    if (source_dim == 0) return target_dim;
    Matrix<Rational> hom(target_dim, source_dim);
    for (int j = 0; j < source_dim; ++j)
        for (int i = 0; i < target_dim; ++i) hom(i, j) = cols[j](i, 0);
    return target_dim - rank(hom);
}

TwoTermComplex random_complex(const TruncatedAlgebra& a, const GVector& g, std::mt19937_64& rng,
                              std::int64_t range) {
    require_finite(a);
    if (static_cast<int>(g.size()) != a.qp().quiver.size())
        fail(ErrorCode::InvalidArgument, "g-vector needs one entry per vertex");
    auto pres = presentation_space(g);
    auto rows = summands(pres.p0), cols = summands(pres.p1);
    std::uniform_int_distribution<std::int64_t> coef(-range, range);
    std::vector<std::vector<AlgebraElement>> map(rows.size(), std::vector<AlgebraElement>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (int b : a.basis_between(rows[r], cols[c])) {
                std::int64_t x = coef(rng);
                if (x != 0) map[r][c].emplace(b, Rational(static_cast<long>(x)));
            }
    return {&a, pres.p1, pres.p0, std::move(map)};
}

GenericValue e_generic(const TruncatedAlgebra& a, const GVector& g1, const GVector& g2, int samples,
                       std::uint64_t seed) {
    if (samples < 1) fail(ErrorCode::InvalidArgument, "need at least one sample");
    std::mt19937_64 rng(seed);
    GenericValue best;
    best.value = std::numeric_limits<int>::max();
    best.samples = samples;
    for (int s = 0; s < samples; ++s) {
        auto x = random_complex(a, g1, rng);
        auto y = random_complex(a, g2, rng);
        int e = e_pair(x, y);
        if (e < best.value) {
            best.value = e;
            best.witness1 = std::move(x);
            best.witness2 = std::move(y);
        }
        if (best.value == 0) break;
    }
    return best;
}

RigidTameReport rigid_tame_probe(const TruncatedAlgebra& a, const GVector& g, int samples, std::uint64_t seed) {
    if (samples < 1) fail(ErrorCode::InvalidArgument, "need at least one sample");
    std::mt19937_64 rng(seed);
    RigidTameReport report;
    report.samples = samples;
    report.seed = seed;
    report.diagonal_min = std::numeric_limits<int>::max();
    report.off_diagonal_min = std::numeric_limits<int>::max();
    for (int s = 0; s < samples; ++s) {
        auto x = random_complex(a, g, rng);
        auto y = random_complex(a, g, rng);
        report.diagonal_min = std::min(report.diagonal_min, e_pair(x, x));
        report.off_diagonal_min = std::min(report.off_diagonal_min, e_pair(x, y));
    }
    return report;
}

} // namespace qpw
