#include "qpw/representation.hpp"

#include "qpw/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace qpw {

const char* field_name(Field f) {
    switch (f) {
    case Field::Q: return "Q";
    case Field::F2: return "F2";
    case Field::F3: return "F3";
    case Field::F5: return "F5";
    }
    return "?";
}

Field parse_field(const std::string& name) {
    if (name == "Q") return Field::Q;
    if (name == "F2") return Field::F2;
    if (name == "F3") return Field::F3;
    if (name == "F5") return Field::F5;
    fail(ErrorCode::InvalidArgument, "unknown field '" + name + "' (expected Q, F2, F3 or F5)");
}

int field_characteristic(Field f) {
    switch (f) {
    case Field::Q: return 0;
    case Field::F2: return 2;
    case Field::F3: return 3;
    case Field::F5: return 5;
    }
    return 0;
}

namespace {

template <class Fn>
decltype(auto) dispatch(Field f, Fn&& fn) {
    switch (f) {
    case Field::F2: return fn(ModP<2>{});
    case Field::F3: return fn(ModP<3>{});
    case Field::F5: return fn(ModP<5>{});
    case Field::Q: break;
    }
    return fn(Rational{});
}

template <class F>
Matrix<F> convert(const Matrix<Rational>& m) {
    Matrix<F> out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out(r, c) = from_rational<F>(m(r, c));
    return out;
}

template <class F>
Matrix<Rational> back(const Matrix<F>& m) {
    Matrix<Rational> out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out(r, c) = to_rational(m(r, c));
    return out;
}

template <class F>
std::map<std::string, Matrix<F>> converted_mats(const Representation& m) {
    std::map<std::string, Matrix<F>> out;
    for (const auto& [id, mat] : m.mats) out.emplace(id, convert<F>(mat));
    return out;
}

void require_same_field(const Representation& a, const Representation& b) {
    if (a.field != b.field) fail(ErrorCode::InvalidArgument, "representations over different fields");
}

} // namespace

int Representation::total_dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }

bool Representation::is_thin() const {
    return std::all_of(dims.begin(), dims.end(), [](int d) { return d <= 1; });
}

Representation normalized(const Quiver& q, Representation m) {
    if (static_cast<int>(m.dims.size()) != q.size())
        fail(ErrorCode::InvalidArgument, "dimension vector has " + std::to_string(m.dims.size()) +
                                             " entries, quiver has " + std::to_string(q.size()) + " vertices");
    for (int d : m.dims)
        if (d < 0) fail(ErrorCode::InvalidArgument, "negative dimension");
    for (const auto& [id, mat] : m.mats)
        if (!q.arrow_index(id)) fail(ErrorCode::NotFound, "matrix given for unknown arrow '" + id + "'");
    for (const auto& a : q.arrows()) {
        auto it = m.mats.find(a.id);
        if (it == m.mats.end()) {
            m.mats.emplace(a.id, Matrix<Rational>(m.dims[a.tgt], m.dims[a.src]));
            continue;
        }
        if (it->second.rows() != m.dims[a.tgt] || it->second.cols() != m.dims[a.src])
            fail(ErrorCode::InvalidArgument, "matrix for arrow '" + a.id + "' must be " +
                                                 std::to_string(m.dims[a.tgt]) + "x" + std::to_string(m.dims[a.src]));
    }
    if (m.field != Field::Q)
        for (auto& [id, mat] : m.mats)
            mat = dispatch(m.field, [&](auto tag) { return back(convert<decltype(tag)>(mat)); });
    return m;
}

Matrix<Rational> path_action(const Quiver& q, const Representation& raw, const Word& w) {
    if (w.empty()) fail(ErrorCode::InvalidArgument, "empty path");
    const Representation m = normalized(q, raw);
    return dispatch(m.field, [&](auto tag) {
        using F = decltype(tag);
        Matrix<F> acc;
        bool first = true;
        for (const auto& id : w) {
            const Arrow& a = q.arrow(id);
            Matrix<F> mat = convert<F>(m.mats.at(a.id));
            acc = first ? mat : mat * acc;
            first = false;
        }
        return back(acc);
    });
}

bool satisfies_relations(const Quiver& q, const std::vector<PathCombination>& relations, const Representation& raw) {
    const Representation m = normalized(q, raw);
    return dispatch(m.field, [&](auto tag) {
        using F = decltype(tag);
        auto mats = converted_mats<F>(m);
        for (const auto& rel : relations) {
            Matrix<F> sum(m.dims[rel.tgt], m.dims[rel.src]);
            for (const auto& [w, c] : rel.terms) {
                Matrix<F> acc = Matrix<F>::identity(m.dims[rel.src]);
                for (const auto& id : w) acc = mats.at(q.arrow(id).id) * acc;
                sum = sum + acc.scaled(from_rational<F>(c));
            }
            if (!sum.is_zero()) return false;
        }
        return true;
    });
}

bool is_nilpotent(const Quiver& q, const Representation& raw, int n) {
    const Representation m = normalized(q, raw);
    return dispatch(m.field, [&](auto tag) {
        using F = decltype(tag);
        auto mats = converted_mats<F>(m);
        // images of all paths of length t, as spanning columns per vertex
        std::vector<Matrix<F>> image(q.size());
        for (int v = 0; v < q.size(); ++v) image[v] = Matrix<F>::identity(m.dims[v]);
        for (int t = 0; t < n; ++t) {
            std::vector<Matrix<F>> next(q.size());
            for (int v = 0; v < q.size(); ++v) next[v] = Matrix<F>(m.dims[v], 0);
            for (const auto& a : q.arrows())
                next[a.tgt] = hconcat(next[a.tgt], mats.at(a.id) * image[a.src]);
            bool all_zero = true;
            for (int v = 0; v < q.size(); ++v) {
                image[v] = column_space(next[v]);
                if (image[v].cols() > 0) all_zero = false;
            }
            if (all_zero) return true;
        }
        return std::all_of(image.begin(), image.end(), [](const Matrix<F>& x) { return x.cols() == 0; });
    });
}

bool check_module(const TruncatedAlgebra& a, const Representation& m) {
    const Quiver& q = a.qp().quiver;
    Representation nm = normalized(q, m);
    return satisfies_relations(q, a.generators(), nm) && is_nilpotent(q, nm, a.working_degree());
}

int pairing(const Theta& theta, const DimVector& d) {
    if (theta.size() != d.size())
        fail(ErrorCode::InvalidArgument, "stability parameter and dimension vector differ in length");
    int s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += theta[i] * d[i];
    return s;
}

HomSpace hom_space(const Quiver& q, const Representation& from_raw, const Representation& to_raw) {
    require_same_field(from_raw, to_raw);
    const Representation from = normalized(q, from_raw);
    const Representation to = normalized(q, to_raw);
    const int n = q.size();
    std::vector<int> offset(n + 1, 0);
    for (int v = 0; v < n; ++v) offset[v + 1] = offset[v] + to.dims[v] * from.dims[v];
    const int vars = offset[n];
    return dispatch(from.field, [&](auto tag) {
        using F = decltype(tag);
        auto mf = converted_mats<F>(from);
        auto mt = converted_mats<F>(to);
        int eqs = 0;
        for (const auto& a : q.arrows()) eqs += to.dims[a.tgt] * from.dims[a.src];
        Matrix<F> sys(eqs, vars);
        int row = 0;
        auto var = [&](int v, int r, int c) { return offset[v] + r * from.dims[v] + c; };
        for (const auto& a : q.arrows()) {
            const int i = a.src, j = a.tgt;
            const auto& M = mf.at(a.id);
            const auto& N = mt.at(a.id);
            for (int r = 0; r < to.dims[j]; ++r)
                for (int c = 0; c < from.dims[i]; ++c, ++row) {
                    // (f_j M)(r,c) - (N f_i)(r,c)
                    for (int k = 0; k < from.dims[j]; ++k) sys(row, var(j, r, k)) += M(k, c);
                    for (int k = 0; k < to.dims[i]; ++k) sys(row, var(i, k, c)) -= N(r, k);
                }
        }
        Matrix<F> kernel = nullspace(sys);
        HomSpace out;
        out.dim = kernel.cols();
        for (int b = 0; b < kernel.cols(); ++b) {
            std::vector<Matrix<Rational>> f;
            for (int v = 0; v < n; ++v) {
                Matrix<Rational> fv(to.dims[v], from.dims[v]);
                for (int r = 0; r < to.dims[v]; ++r)
                    for (int c = 0; c < from.dims[v]; ++c) fv(r, c) = to_rational(kernel(var(v, r, c), b));
                f.push_back(std::move(fv));
            }
            out.basis.push_back(std::move(f));
        }
        return out;
    });
}

bool is_brick(const Quiver& q, const Representation& m) {
    Representation nm = normalized(q, m);
    return nm.total_dim() > 0 && hom_space(q, nm, nm).dim == 1;
}

namespace {

// All subspaces of F^d as d x k basis matrices (RREF row spaces, transposed).
template <class F, int P>
std::vector<Matrix<F>> all_subspaces(int d) {
    std::vector<Matrix<F>> out;
    for (int k = 0; k <= d; ++k) {
        std::vector<int> piv(k);
        std::iota(piv.begin(), piv.end(), 0);
        for (;;) {
            // free slots: (row r, col c) with c > piv[r] and c not a pivot
            std::vector<std::pair<int, int>> slots;
            for (int r = 0; r < k; ++r)
                for (int c = piv[r] + 1; c < d; ++c)
                    if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
            std::vector<int> digits(slots.size(), 0);
            for (;;) {
                Matrix<F> basis(d, k);
                for (int r = 0; r < k; ++r) basis(piv[r], r) = F(1);
                for (std::size_t s = 0; s < slots.size(); ++s) basis(slots[s].second, slots[s].first) = F(digits[s]);
                out.push_back(std::move(basis));
                std::size_t pos = 0;
                while (pos < digits.size() && ++digits[pos] == P) digits[pos++] = 0;
                if (pos == digits.size()) break;
            }
            int i = k - 1;
            while (i >= 0 && piv[i] == d - k + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    return out;
}

template <class F>
std::vector<Matrix<F>> subspaces_of(int d) {
    if constexpr (std::is_same_v<F, ModP<2>>) return all_subspaces<F, 2>(d);
    else if constexpr (std::is_same_v<F, ModP<3>>) return all_subspaces<F, 3>(d);
    else if constexpr (std::is_same_v<F, ModP<5>>) return all_subspaces<F, 5>(d);
    else fail(ErrorCode::Domain, "subspace enumeration needs a prime field");
}

// Every arrow-closed tuple of subspaces; `visit` gets bases per vertex.
template <class F>
void for_each_closed_tuple(const Quiver& q, const Representation& m,
                           const std::function<void(const std::vector<Matrix<F>>&)>& visit) {
    const int n = q.size();
    auto mats = converted_mats<F>(m);
    std::vector<std::vector<Matrix<F>>> choices(n);
    for (int v = 0; v < n; ++v) choices[v] = subspaces_of<F>(m.dims[v]);
    // arrows checkable once both ends are assigned
    std::vector<std::vector<const Arrow*>> ready(n);
    for (const auto& a : q.arrows()) ready[std::max(a.src, a.tgt)].push_back(&a);
    std::vector<Matrix<F>> cur(n);
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            visit(cur);
            return;
        }
        for (const auto& u : choices[v]) {
            cur[v] = u;
            bool ok = true;
            for (const Arrow* a : ready[v]) {
                if (!column_space_contains(cur[a->tgt], mats.at(a->id) * cur[a->src])) {
                    ok = false;
                    break;
                }
            }
            if (ok) rec(v + 1);
        }
    };
    rec(0);
}

std::vector<std::vector<int>> closed_subsets(const Quiver& q, const Representation& m) {
    const int n = q.size();
    std::vector<int> support;
    for (int v = 0; v < n; ++v)
        if (m.dims[v] == 1) support.push_back(v);
    if (support.size() > 24) fail(ErrorCode::SizeGuard, "thin module support too large to enumerate");
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1u << support.size()); ++mask) {
        std::vector<char> in(n, 0);
        for (std::size_t b = 0; b < support.size(); ++b)
            if (mask >> b & 1u) in[support[b]] = 1;
        bool closed = true;
        for (const auto& a : q.arrows())
            if (in[a.src] && !m.mats.at(a.id).is_zero() && !in[a.tgt]) {
                closed = false;
                break;
            }
        if (!closed) continue;
        std::vector<int> d(n, 0);
        for (int v = 0; v < n; ++v) d[v] = in[v];
        out.push_back(std::move(d));
    }
    return out;
}

void require_enumerable(const Representation& m, int cap) {
    if (m.is_thin()) return;
    if (m.field == Field::Q)
        fail(ErrorCode::Domain, "submodule enumeration over Q needs a thin module; use a prime field");
    if (m.total_dim() > cap)
        fail(ErrorCode::SizeGuard, "total dimension " + std::to_string(m.total_dim()) + " exceeds enumeration cap " +
                                       std::to_string(cap));
}

// Restriction of the arrow maps to an invariant tuple of subspaces.
template <class F>
Representation sub_representation(const Quiver& q, const Representation& m, const std::vector<Matrix<F>>& bases) {
    auto mats = converted_mats<F>(m);
    Representation sub;
    sub.field = m.field;
    for (const auto& b : bases) sub.dims.push_back(b.cols());
    for (const auto& a : q.arrows()) {
        const Matrix<F>& bt = bases[a.tgt];
        Matrix<F> image = mats.at(a.id) * bases[a.src];
        // solve bt * X = image; bt has full column rank
        Matrix<F> aug = hconcat(bt, image);
        rref(aug);
        Matrix<F> x(bt.cols(), image.cols());
        for (int r = 0; r < bt.cols(); ++r)
            for (int c = 0; c < image.cols(); ++c) x(r, c) = aug(r, bt.cols() + c);
        sub.mats.emplace(a.id, back(x));
    }
    return sub;
}

} // namespace

std::set<DimVector> submodule_dim_vectors(const Quiver& q, const Representation& m, int cap) {
    Representation nm = normalized(q, m);
    require_enumerable(nm, cap);
    std::set<DimVector> out;
    if (nm.is_thin()) {
        for (auto& d : closed_subsets(q, nm)) out.insert(std::move(d));
        return out;
    }
    dispatch(nm.field, [&](auto tag) {
        using F = decltype(tag);
        if constexpr (!std::is_same_v<F, Rational>) {
            for_each_closed_tuple<F>(q, nm, [&](const std::vector<Matrix<F>>& bases) {
                DimVector d;
                for (const auto& b : bases) d.push_back(b.cols());
                out.insert(std::move(d));
            });
        }
        return 0;
    });
    return out;
}

std::vector<Representation> proper_submodules(const Quiver& q, const Representation& m, int cap) {
    Representation nm = normalized(q, m);
    require_enumerable(nm, cap);
    const int total = nm.total_dim();
    std::vector<Representation> out;
    auto keep = [&](const Representation& s) {
        const int t = s.total_dim();
        if (t > 0 && t < total) out.push_back(s);
    };
    if (nm.is_thin()) {
        for (const auto& d : closed_subsets(q, nm)) {
            Representation s;
            s.field = nm.field;
            s.dims = d;
            for (const auto& a : q.arrows()) {
                Matrix<Rational> mat(d[a.tgt], d[a.src]);
                if (d[a.src] && d[a.tgt]) mat(0, 0) = nm.mats.at(a.id)(0, 0);
                s.mats.emplace(a.id, std::move(mat));
            }
            keep(s);
        }
        return out;
    }
    dispatch(nm.field, [&](auto tag) {
        using F = decltype(tag);
        if constexpr (!std::is_same_v<F, Rational>) {
            for_each_closed_tuple<F>(q, nm, [&](const std::vector<Matrix<F>>& bases) {
                keep(sub_representation<F>(q, nm, bases));
            });
        }
        return 0;
    });
    return out;
}

bool is_semistable(const Quiver& q, const Representation& m, const Theta& theta, int cap) {
    if (pairing(theta, m.dims) != 0) return false;
    for (const auto& d : submodule_dim_vectors(q, m, cap))
        if (pairing(theta, d) > 0) return false;
    return true;
}

bool is_stable(const Quiver& q, const Representation& m, const Theta& theta, int cap) {
    if (m.total_dim() == 0 || pairing(theta, m.dims) != 0) return false;
    for (const auto& d : submodule_dim_vectors(q, m, cap)) {
        if (d == m.dims || std::all_of(d.begin(), d.end(), [](int x) { return x == 0; })) continue;
        if (pairing(theta, d) >= 0) return false;
    }
    return true;
}

bool is_simple_in_W_theta(const Quiver& q, const Representation& m, const Theta& theta, int cap) {
    if (m.total_dim() == 0 || !is_semistable(q, m, theta, cap)) return false;
    for (const auto& sub : proper_submodules(q, m, cap))
        if (is_semistable(q, sub, theta, cap)) return false;
    return true;
}

Representation direct_sum(const Quiver& q, const Representation& a, const Representation& b) {
    require_same_field(a, b);
    Representation na = normalized(q, a), nb = normalized(q, b);
    Representation out;
    out.field = a.field;
    for (int v = 0; v < q.size(); ++v) out.dims.push_back(na.dims[v] + nb.dims[v]);
    for (const auto& arr : q.arrows()) {
        const auto& x = na.mats.at(arr.id);
        const auto& y = nb.mats.at(arr.id);
        Matrix<Rational> m(out.dims[arr.tgt], out.dims[arr.src]);
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < x.cols(); ++c) m(r, c) = x(r, c);
        for (int r = 0; r < y.rows(); ++r)
            for (int c = 0; c < y.cols(); ++c) m(x.rows() + r, x.cols() + c) = y(r, c);
        out.mats.emplace(arr.id, std::move(m));
    }
    return out;
}

Representation simple_module(const Quiver& q, Field f, int vertex) {
    if (vertex < 0 || vertex >= q.size()) fail(ErrorCode::OutOfRange, "vertex out of range");
    Representation s{f, DimVector(q.size(), 0), {}};
    s.dims[vertex] = 1;
    return normalized(q, s);
}

Representation zero_module(const Quiver& q, Field f) {
    return normalized(q, Representation{f, DimVector(q.size(), 0), {}});
}

} // namespace qpw
