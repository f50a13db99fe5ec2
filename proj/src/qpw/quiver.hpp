#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpw {

/// Dense n x n integer matrix. Used for exchange matrices and for the
/// (symmetric) adjacency matrices of underlying diagrams.
class ExchangeMatrix {
public:
    ExchangeMatrix() = default;
    explicit ExchangeMatrix(int n) : n_(n), a_(std::size_t(n) * std::size_t(n), 0) {}

    static ExchangeMatrix from_rows(const std::vector<std::vector<int>>& rows);

    int size() const { return n_; }
    int& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
    int operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

    std::vector<std::vector<int>> rows() const;
    bool is_skew_symmetric() const;
    int max_abs_entry() const;
    const std::vector<int>& data() const { return a_; }

    friend bool operator==(const ExchangeMatrix&, const ExchangeMatrix&) = default;

private:
    int n_ = 0;
    std::vector<int> a_;
};

struct Arrow {
    std::string id;
    int src = 0; // 0-based
    int tgt = 0;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A finite quiver without loops. The arrow list is the primary data; the
/// exchange matrix b[i][j] = #(i->j) - #(j->i) is kept in sync with it.
/// Arrows i->j and j->i may coexist (2-cycles) unless the builder was asked
/// for a two-cycle-free quiver.
class Quiver {
public:
    Quiver() = default;

    int size() const { return b_.size(); }
    const ExchangeMatrix& b() const { return b_; }
    int b(int i, int j) const { return b_(i, j); }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> arrow_index(const std::string& id) const;
    const Arrow& arrow(const std::string& id) const;
    std::vector<std::size_t> arrows_from_to(int src, int tgt) const;

    bool has_two_cycle() const;
    bool vertex_on_two_cycle(int k) const;

    friend bool operator==(const Quiver&, const Quiver&) = default;

private:
    friend Quiver build_quiver(const ExchangeMatrix&, std::vector<std::string>, bool);
    friend Quiver build_quiver(int, std::vector<Arrow>, std::vector<std::string>, bool);

    ExchangeMatrix b_;
    std::vector<Arrow> arrows_;
    std::vector<std::string> labels_;
};

/// From an exchange matrix. Arrow ids are generated ("a1_2", or "a1_2_1",
/// "a1_2_2", ... for multiple arrows; vertices 1-based in ids). The result is
/// always two-cycle-free; `two_cycle_free` is accepted for symmetry.
Quiver build_quiver(const ExchangeMatrix& b, std::vector<std::string> labels = {},
                    bool two_cycle_free = false);

/// From an arrow list. Empty ids are generated as above.
Quiver build_quiver(int n, std::vector<Arrow> arrows, std::vector<std::string> labels = {},
                    bool two_cycle_free = false);

std::string default_label(int vertex);
std::string generated_arrow_id(int src, int tgt, int index, int count);

ExchangeMatrix mutate_matrix(const ExchangeMatrix& b, int k);

/// Quiver mutation at k. The arrow list is regenerated from the mutated
/// exchange matrix.
Quiver mutate(const Quiver& q, int k);

/// Full subquiver on `vertices` (taken in ascending order); arrows keep ids.
Quiver full_subquiver(const Quiver& q, std::span<const int> vertices);

bool is_connected(const Quiver& q);
bool is_connected(const ExchangeMatrix& b);

/// No oriented cycles (2-cycles count as cycles).
bool is_acyclic(const Quiver& q);
bool is_acyclic(const ExchangeMatrix& b);

struct CanonicalForm {
    std::vector<int> permutation; // position -> original vertex
    ExchangeMatrix matrix;        // matrix(i, j) = b(permutation[i], permutation[j])
};

inline constexpr int kMaxCanonicalVertices = 9;

/// Relabeling-invariant normal form of an arbitrary square integer matrix.
/// Refuses n > kMaxCanonicalVertices.
CanonicalForm canonical_form(const ExchangeMatrix& m);
CanonicalForm canonical_form(const Quiver& q);

/// Compact byte key of a canonical matrix, for hashing.
std::string canonical_key(const ExchangeMatrix& canonical);

/// Apply a vertex relabeling: result(perm[i], perm[j]) = m(i, j).
ExchangeMatrix relabel(const ExchangeMatrix& m, std::span<const int> perm);

} // namespace qpw
