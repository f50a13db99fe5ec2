#pragma once

// Finite-dimensional representations of a quiver with relations, over Q or a
// small prime field, and King stability.
//
// Right modules are covariant representations: arrow a: i -> j carries a
// d_j x d_i matrix, and the path a1 a2 ... ak acts by M_ak ... M_a1.

#include "qpw/jacobian.hpp"
#include "qpw/linalg.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace qpw {

enum class Field { Q, F2, F3, F5 };

const char* field_name(Field f);
Field parse_field(const std::string& name);
/// 0 for Q.
int field_characteristic(Field f);

using DimVector = std::vector<int>;
using Theta = std::vector<int>;

struct Representation {
    Field field = Field::Q;
    DimVector dims;
    /// Arrow id -> d_tgt x d_src matrix. Entries over F_p are kept in [0, p).
    /// Arrows without an entry act by zero.
    std::map<std::string, Matrix<Rational>> mats;

    int total_dim() const;
    bool is_thin() const;

    friend bool operator==(const Representation&, const Representation&) = default;
};

/// Validates dimension vector and matrix shapes against the quiver, reduces
/// F_p entries, fills in zero matrices for missing arrows. Throws on mismatch.
Representation normalized(const Quiver& q, Representation m);

/// Matrix of a path (arrow ids, left to right), d_tgt x d_src.
Matrix<Rational> path_action(const Quiver& q, const Representation& m, const Word& w);

bool satisfies_relations(const Quiver& q, const std::vector<PathCombination>& relations, const Representation& m);

/// Every path of length `n` acts by zero.
bool is_nilpotent(const Quiver& q, const Representation& m, int n);

/// Shape, relations of the algebra, nilpotency at the truncation degree.
bool check_module(const TruncatedAlgebra& a, const Representation& m);

int pairing(const Theta& theta, const DimVector& d);

struct HomSpace {
    int dim = 0;
    /// Each basis element: one d'_v x d_v matrix per vertex.
    std::vector<std::vector<Matrix<Rational>>> basis;
};

HomSpace hom_space(const Quiver& q, const Representation& from, const Representation& to);

bool is_brick(const Quiver& q, const Representation& m);

inline constexpr int kDefaultSubspaceCap = 6;

/// Dimension vectors of all submodules (0 and [M] included). Thin modules
/// over any field use closed vertex subsets; otherwise exhaustive subspace
/// enumeration over a prime field with total dimension <= cap.
std::set<DimVector> submodule_dim_vectors(const Quiver& q, const Representation& m, int cap = kDefaultSubspaceCap);

/// Submodules as representations in their own right (proper and nonzero
/// only), computed from explicit subspace bases.
std::vector<Representation> proper_submodules(const Quiver& q, const Representation& m,
                                              int cap = kDefaultSubspaceCap);

bool is_semistable(const Quiver& q, const Representation& m, const Theta& theta, int cap = kDefaultSubspaceCap);
bool is_stable(const Quiver& q, const Representation& m, const Theta& theta, int cap = kDefaultSubspaceCap);

/// M is in W_theta and has no proper nonzero subobject in W_theta.
bool is_simple_in_W_theta(const Quiver& q, const Representation& m, const Theta& theta,
                          int cap = kDefaultSubspaceCap);

Representation direct_sum(const Quiver& q, const Representation& a, const Representation& b);
Representation simple_module(const Quiver& q, Field f, int vertex);
Representation zero_module(const Quiver& q, Field f);

} // namespace qpw
