#pragma once

// Exact dense linear algebra over Q (GMP rationals) and small prime fields.
// Everything is templated on the scalar type; ModP<p> and Rational both
// satisfy the same arithmetic surface.

#include "qpw/error.hpp"
#include "qpw/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qpw {

template <int P>
class ModP {
    static_assert(P == 2 || P == 3 || P == 5 || P == 7, "small primes only");

public:
    static constexpr int modulus = P;

    constexpr ModP() = default;
    constexpr explicit ModP(long long x) : v_(static_cast<int>(((x % P) + P) % P)) {}

    constexpr int value() const { return v_; }

    friend constexpr ModP operator+(ModP a, ModP b) { return ModP(a.v_ + b.v_); }
    friend constexpr ModP operator-(ModP a, ModP b) { return ModP(a.v_ - b.v_); }
    friend constexpr ModP operator*(ModP a, ModP b) { return ModP(a.v_ * b.v_); }
    friend constexpr ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
    constexpr ModP operator-() const { return ModP(-v_); }
    constexpr ModP& operator+=(ModP o) { return *this = *this + o; }
    constexpr ModP& operator-=(ModP o) { return *this = *this - o; }
    constexpr ModP& operator*=(ModP o) { return *this = *this * o; }
    friend constexpr bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }
    friend constexpr bool operator<(ModP a, ModP b) { return a.v_ < b.v_; }

    constexpr ModP inverse() const {
        if (v_ == 0) fail(ErrorCode::Domain, "division by zero in prime field");
        // Fermat: v^(P-2)
        ModP r(1);
        for (int i = 0; i < P - 2; ++i) r = r * *this;
        return r;
    }

private:
    int v_ = 0;
};

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
template <int P>
constexpr bool is_zero(ModP<P> x) { return x.value() == 0; }

template <class F>
F from_rational(const Rational& q);

template <>
inline Rational from_rational<Rational>(const Rational& q) { return q; }

template <class F>
    requires(F::modulus > 0)
F from_rational_mod(const Rational& q) {
    mpz_class num = q.get_num() % F::modulus;
    mpz_class den = q.get_den() % F::modulus;
    if (den == 0) {
        fail(ErrorCode::Domain, "denominator vanishes modulo " + std::to_string(F::modulus));
    }
    return F(num.get_si()) / F(den.get_si());
}

template <>
inline ModP<2> from_rational<ModP<2>>(const Rational& q) { return from_rational_mod<ModP<2>>(q); }
template <>
inline ModP<3> from_rational<ModP<3>>(const Rational& q) { return from_rational_mod<ModP<3>>(q); }
template <>
inline ModP<5> from_rational<ModP<5>>(const Rational& q) { return from_rational_mod<ModP<5>>(q); }
template <>
inline ModP<7> from_rational<ModP<7>>(const Rational& q) { return from_rational_mod<ModP<7>>(q); }

inline Rational to_rational(const Rational& q) { return q; }
template <int P>
Rational to_rational(ModP<P> x) { return Rational(x.value()); }

template <class F>
F field_one() { return F(1); }

template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * std::size_t(cols), F(0)) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    F& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
    const F& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!qpw::is_zero(x)) return false;
        return true;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    // Columns [c0, c0 + n).
    Matrix column_block(int c0, int n) const {
        Matrix b(rows_, n);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < n; ++c) b(r, c) = (*this)(r, c0 + c);
        return b;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) fail(ErrorCode::InvalidArgument, "matrix shape mismatch in product");
        Matrix p(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const F& x = a(i, k);
                if (qpw::is_zero(x)) continue;
                for (int j = 0; j < b.cols_; ++j) p(i, j) += x * b(k, j);
            }
        return p;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorCode::InvalidArgument, "matrix shape mismatch in sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorCode::InvalidArgument, "matrix shape mismatch in difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    Matrix scaled(const F& s) const {
        Matrix m = *this;
        for (auto& x : m.data_) x *= s;
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<F> data_;
};

// Reduced row echelon form in place. Returns pivot columns.
template <class F>
std::vector<int> rref(Matrix<F>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int sel = -1;
        for (int r = row; r < m.rows(); ++r)
            if (!is_zero(m(r, col))) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
        F inv = F(1) / m(row, col);
        for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            F f = m(r, col);
            for (int c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
int rank(Matrix<F> m) {
    return static_cast<int>(rref(m).size());
}

// Basis of {x : m x = 0}, one column per basis vector.
template <class F>
Matrix<F> nullspace(const Matrix<F>& m) {
    Matrix<F> r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    int nfree = m.cols() - static_cast<int>(pivots.size());
    Matrix<F> basis(m.cols(), nfree);
    int k = 0;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        basis(free, k) = F(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], k) = -r(int(i), free);
        ++k;
    }
    return basis;
}

// A column basis of the column space of m (a subset of its columns).
template <class F>
Matrix<F> column_space(const Matrix<F>& m) {
    Matrix<F> r = m;
    auto pivots = rref(r);
    Matrix<F> out(m.rows(), static_cast<int>(pivots.size()));
    for (std::size_t k = 0; k < pivots.size(); ++k)
        for (int i = 0; i < m.rows(); ++i) out(i, int(k)) = m(i, pivots[k]);
    return out;
}

template <class F>
Matrix<F> hconcat(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) fail(ErrorCode::InvalidArgument, "hconcat row mismatch");
    Matrix<F> m(a.rows(), a.cols() + b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
        for (int c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
    }
    return m;
}

// Column space of `inner` contained in column space of `outer`.
template <class F>
bool column_space_contains(const Matrix<F>& outer, const Matrix<F>& inner) {
    if (inner.cols() == 0) return true;
    return rank(hconcat(outer, inner)) == rank(outer);
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    int n = m.rows();
    Matrix<F> aug = hconcat(m, Matrix<F>::identity(n));
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
    return aug.column_block(n, n);
}

// Invertible E, G with E * c * G = [[I_r, 0], [0, 0]].
template <class F>
struct RankNormalForm {
    Matrix<F> left;
    Matrix<F> right;
    int rank = 0;
};

template <class F>
RankNormalForm<F> rank_normal_form(const Matrix<F>& c) {
    const int p = c.rows();
    const int q = c.cols();
    // Row-reduce [c | I_p] to get E with E c = rref(c).
    Matrix<F> aug = hconcat(c, Matrix<F>::identity(p));
    Matrix<F> work = aug;
    // Only pivot inside the first q columns.
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < q && row < p; ++col) {
        int sel = -1;
        for (int r = row; r < p; ++r)
            if (!is_zero(work(r, col))) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int cc = 0; cc < work.cols(); ++cc) std::swap(work(sel, cc), work(row, cc));
        F inv = F(1) / work(row, col);
        for (int cc = 0; cc < work.cols(); ++cc) work(row, cc) *= inv;
        for (int r = 0; r < p; ++r) {
            if (r == row || is_zero(work(r, col))) continue;
            F f = work(r, col);
            for (int cc = 0; cc < work.cols(); ++cc) work(r, cc) -= f * work(row, cc);
        }
        pivots.push_back(col);
        ++row;
    }
    RankNormalForm<F> out;
    out.rank = static_cast<int>(pivots.size());
    out.left = work.column_block(q, p);
    Matrix<F> reduced = work.column_block(0, q);
    // Column operations: move pivot columns to the front, clear the rest.
    Matrix<F> g = Matrix<F>::identity(q);
    std::vector<int> order = pivots;
    std::vector<bool> used(q, false);
    for (int pc : pivots) used[pc] = true;
    for (int col = 0; col < q; ++col)
        if (!used[col]) order.push_back(col);
    Matrix<F> perm(q, q);
    for (int k = 0; k < q; ++k) perm(order[k], k) = F(1);
    Matrix<F> rp = reduced * perm;
    // Now rp = [[I_r, X], [0, 0]]; clear X with G2 = [[I, -X], [0, I]].
    Matrix<F> g2 = Matrix<F>::identity(q);
    for (int i = 0; i < out.rank; ++i)
        for (int j = out.rank; j < q; ++j) g2(i, j) = -rp(i, j);
    out.right = perm * g2;
    return out;
}

} // namespace qpw
