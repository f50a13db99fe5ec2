#pragma once

// Two-term complexes of projective right modules and E-invariants.
//
// P_i = e_i Λ. A morphism P_i -> P_j is left multiplication by an element of
// e_j Λ e_i, so the composite of x: P_i -> P_j and y: P_j -> P_k is y * x.

#include "qpw/jacobian.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qpw {

using GVector = std::vector<int>;

struct TwoTermComplex {
    const TruncatedAlgebra* algebra = nullptr;
    std::vector<int> p1; // multiplicities in degree -1
    std::vector<int> p0; // multiplicities in degree 0
    /// map[r][c]: from the c-th summand of P^{-1} to the r-th summand of P^0,
    /// summands listed vertex by vertex.
    std::vector<std::vector<AlgebraElement>> map;
};

/// Vertex of each indecomposable summand, in order.
std::vector<int> summands(const std::vector<int>& multiplicities);

/// Basis paths of Hom(P_i, P_j) = e_j Λ e_i.
std::vector<int> hom_projectives(const TruncatedAlgebra& a, int i, int j);

struct Presentation {
    std::vector<int> p1;
    std::vector<int> p0;
};

/// p0 = positive part of g, p1 = negative part.
Presentation presentation_space(const GVector& g);

/// Validates block shapes and that every entry lies in the right e_j Λ e_i.
TwoTermComplex make_complex(const TruncatedAlgebra& a, std::vector<int> p1, std::vector<int> p0,
                            std::vector<std::vector<AlgebraElement>> map);

/// dim Hom(a1, a2[1]) in the homotopy category.
int e_pair(const TwoTermComplex& a1, const TwoTermComplex& a2);

/// Complex for g with coefficients drawn uniformly from [-range, range].
TwoTermComplex random_complex(const TruncatedAlgebra& a, const GVector& g, std::mt19937_64& rng,
                              std::int64_t range = 1000000);

struct GenericValue {
    int value = 0; // attained upper bound for e(g1, g2)
    TwoTermComplex witness1;
    TwoTermComplex witness2;
    int samples = 0;
};

GenericValue e_generic(const TruncatedAlgebra& a, const GVector& g1, const GVector& g2, int samples,
                       std::uint64_t seed);

struct RigidTameReport {
    int diagonal_min = 0;
    int off_diagonal_min = 0;
    int samples = 0;
    std::uint64_t seed = 0;
};

RigidTameReport rigid_tame_probe(const TruncatedAlgebra& a, const GVector& g, int samples, std::uint64_t seed);

} // namespace qpw
