#pragma once

// Truncated Jacobian algebras J(Q,W) / m^{N+1}.
//
// Paths compose left to right. The quotient is computed on the length
// filtration: ideal elements are echelonized with columns ordered by
// (length, word), so pivots are lowest-degree leading terms and the non-pivot
// paths ("standard paths") form a basis of the quotient.

#include "qpw/qp.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace qpw {

inline constexpr std::size_t kMaxStoredPaths = 200000;

struct Path {
    int src = 0;
    int tgt = 0;
    std::vector<int> arrows; // indices into the quiver's arrow list; empty = e_src
    std::size_t length() const { return arrows.size(); }
};

/// Sparse combination of path columns.
using AlgebraElement = std::map<int, Rational>;

struct FinDimCert {
    enum class Status { FiniteDim, UndeterminedAtTruncation };
    Status status = Status::UndeterminedAtTruncation;
    std::size_t total_dim = 0;            // meaningful for FiniteDim
    std::optional<int> vanishing_degree;  // first zero layer
    int truncation = 0;

    bool finite() const { return status == Status::FiniteDim; }
    std::string name() const;
};

/// One generator per arrow, in arrow order: the cyclic derivatives.
std::vector<PathCombination> jacobian_ideal_generators(const QuiverWithPotential& p);

class TruncatedAlgebra {
public:
    const QuiverWithPotential& qp() const { return qp_; }
    int truncation() const { return truncation_; }
    /// Length bound actually used; smaller than truncation() once a zero
    /// layer has been found.
    int working_degree() const { return working_; }

    /// Layers 0..vanishing degree when finite, else 0..N.
    const std::vector<std::size_t>& graded_dims() const { return graded_; }
    const FinDimCert& certificate() const { return cert_; }
    const std::vector<PathCombination>& generators() const { return generators_; }

    std::size_t path_count() const { return paths_.size(); }
    const Path& path(int col) const { return paths_[col]; }
    Word path_word(int col) const;
    std::optional<int> path_column(const Path& p) const;

    /// Standard (basis) paths, ascending column order.
    const std::vector<int>& basis() const { return basis_; }
    /// Basis paths from `src` to `tgt`; this is e_src Λ e_tgt.
    std::vector<int> basis_between(int src, int tgt) const;
    bool is_basis_column(int col) const { return pivot_row_[col] < 0; }

    /// Reduces to a combination of basis paths.
    AlgebraElement normal_form(AlgebraElement x) const;
    AlgebraElement element(const PathCombination& c) const;
    AlgebraElement element(const Word& w) const;
    AlgebraElement idempotent(int vertex) const;

    /// x * y (x first); products longer than the working degree are dropped
    /// and reported through `dropped`.
    AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y, bool* dropped = nullptr) const;

    /// Nonzero products of basis paths: (col_s, col_t) -> normal form.
    std::map<std::pair<int, int>, AlgebraElement> mult_table() const;

private:
    friend TruncatedAlgebra truncated_quotient(const QuiverWithPotential& p, int n);
    friend class QuotientBuilder;

    QuiverWithPotential qp_;
    int truncation_ = 0;
    int working_ = 0;
    std::vector<Path> paths_;
    std::map<std::pair<int, std::vector<int>>, int> column_of_; // (src, arrows) -> col
    std::vector<std::map<int, Rational>> rows_;
    std::vector<int> pivot_row_;
    std::vector<int> basis_;
    std::vector<std::size_t> graded_;
    std::vector<PathCombination> generators_;
    FinDimCert cert_;
};

/// Throws SizeGuard when more than kMaxStoredPaths paths would be stored.
TruncatedAlgebra truncated_quotient(const QuiverWithPotential& p, int n);

} // namespace qpw
