#include "qpw/quiver.hpp"

#include "qpw/error.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <set>

namespace qpw {

ExchangeMatrix ExchangeMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const int n = static_cast<int>(rows.size());
    ExchangeMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            fail(ErrorCode::InvalidArgument, "exchange matrix must be square");
        for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<int>> ExchangeMatrix::rows() const {
    std::vector<std::vector<int>> out(n_, std::vector<int>(n_));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
    return out;
}

bool ExchangeMatrix::is_skew_symmetric() const {
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
}

int ExchangeMatrix::max_abs_entry() const {
    int m = 0;
    for (int x : a_) m = std::max(m, std::abs(x));
    return m;
}

std::optional<std::size_t> Quiver::arrow_index(const std::string& id) const {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].id == id) return i;
    return std::nullopt;
}

const Arrow& Quiver::arrow(const std::string& id) const {
    auto idx = arrow_index(id);
    if (!idx) fail(ErrorCode::NotFound, "unknown arrow '" + id + "'");
    return arrows_[*idx];
}

std::vector<std::size_t> Quiver::arrows_from_to(int src, int tgt) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].src == src && arrows_[i].tgt == tgt) out.push_back(i);
    return out;
}

bool Quiver::vertex_on_two_cycle(int k) const {
    for (const auto& a : arrows_) {
        if (a.src != k) continue;
        for (const auto& c : arrows_)
            if (c.src == a.tgt && c.tgt == k) return true;
    }
    return false;
}

bool Quiver::has_two_cycle() const {
    for (int k = 0; k < size(); ++k)
        if (vertex_on_two_cycle(k)) return true;
    return false;
}

std::string default_label(int vertex) { return std::to_string(vertex + 1); }

std::string generated_arrow_id(int src, int tgt, int index, int count) {
    std::string id = "a" + std::to_string(src + 1) + "_" + std::to_string(tgt + 1);
    if (count > 1) id += "_" + std::to_string(index + 1);
    return id;
}

namespace {

std::vector<std::string> checked_labels(int n, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back(default_label(i));
    }
    if (static_cast<int>(labels.size()) != n)
        fail(ErrorCode::InvalidArgument, "label count does not match vertex count");
    return labels;
}

std::vector<Arrow> arrows_from_matrix(const ExchangeMatrix& b) {
    std::vector<Arrow> arrows;
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) {
            int m = b(i, j);
            for (int t = 0; t < m; ++t) arrows.push_back({generated_arrow_id(i, j, t, m), i, j});
        }
    return arrows;
}

} // namespace

Quiver build_quiver(const ExchangeMatrix& b, std::vector<std::string> labels, bool) {
    const int n = b.size();
    for (int i = 0; i < n; ++i)
        if (b(i, i) != 0) fail(ErrorCode::Loop, "nonzero diagonal entry at vertex " + std::to_string(i + 1));
    if (!b.is_skew_symmetric()) fail(ErrorCode::NotSkewSymmetric, "exchange matrix is not skew-symmetric");
    Quiver q;
    q.b_ = b;
    q.arrows_ = arrows_from_matrix(b);
    q.labels_ = checked_labels(n, std::move(labels));
    return q;
}

Quiver build_quiver(int n, std::vector<Arrow> arrows, std::vector<std::string> labels, bool two_cycle_free) {
    if (n < 0) fail(ErrorCode::InvalidArgument, "negative vertex count");
    ExchangeMatrix b(n);
    std::vector<int> count(std::size_t(n) * std::size_t(n), 0);
    for (const auto& a : arrows) {
        if (a.src < 0 || a.src >= n || a.tgt < 0 || a.tgt >= n)
            fail(ErrorCode::OutOfRange, "arrow endpoint outside vertex range");
        if (a.src == a.tgt) fail(ErrorCode::Loop, "loop at vertex " + std::to_string(a.src + 1));
        ++count[std::size_t(a.src) * n + a.tgt];
    }
    std::vector<int> seen(std::size_t(n) * std::size_t(n), 0);
    std::set<std::string> ids;
    for (auto& a : arrows) {
        int& idx = seen[std::size_t(a.src) * n + a.tgt];
        if (a.id.empty()) a.id = generated_arrow_id(a.src, a.tgt, idx, count[std::size_t(a.src) * n + a.tgt]);
        ++idx;
        if (!ids.insert(a.id).second) fail(ErrorCode::InvalidArgument, "duplicate arrow id '" + a.id + "'");
        ++b(a.src, a.tgt);
        --b(a.tgt, a.src);
    }
    Quiver q;
    q.b_ = b;
    q.arrows_ = std::move(arrows);
    q.labels_ = checked_labels(n, std::move(labels));
    if (two_cycle_free && q.has_two_cycle()) fail(ErrorCode::TwoCycle, "quiver has a 2-cycle");
    return q;
}

ExchangeMatrix mutate_matrix(const ExchangeMatrix& b, int k) {
    const int n = b.size();
    if (k < 0 || k >= n) fail(ErrorCode::OutOfRange, "mutation vertex " + std::to_string(k + 1) + " out of range");
    ExchangeMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == k || j == k) {
                out(i, j) = -b(i, j);
            } else {
                const int bik = b(i, k), bkj = b(k, j);
                out(i, j) = b(i, j) + (std::abs(bik) * bkj + bik * std::abs(bkj)) / 2;
            }
        }
    return out;
}

Quiver mutate(const Quiver& q, int k) {
    if (k < 0 || k >= q.size())
        fail(ErrorCode::OutOfRange, "mutation vertex " + std::to_string(k + 1) + " out of range");
    if (q.has_two_cycle()) fail(ErrorCode::TwoCycle, "quiver mutation requires a 2-cycle-free quiver");
    return build_quiver(mutate_matrix(q.b(), k), q.labels());
}

Quiver full_subquiver(const Quiver& q, std::span<const int> vertices) {
    std::vector<int> vs(vertices.begin(), vertices.end());
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
        fail(ErrorCode::InvalidArgument, "repeated vertex in subset");
    std::vector<int> position(q.size(), -1);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i] < 0 || vs[i] >= q.size())
            fail(ErrorCode::OutOfRange, "subset vertex " + std::to_string(vs[i] + 1) + " out of range");
        position[vs[i]] = static_cast<int>(i);
    }
    std::vector<Arrow> arrows;
    for (const auto& a : q.arrows())
        if (position[a.src] >= 0 && position[a.tgt] >= 0) arrows.push_back({a.id, position[a.src], position[a.tgt]});
    std::vector<std::string> labels;
    for (int v : vs) labels.push_back(q.labels()[v]);
    return build_quiver(static_cast<int>(vs.size()), std::move(arrows), std::move(labels));
}

bool is_connected(const ExchangeMatrix& b) {
    const int n = b.size();
    if (n <= 1) return true;
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u)
            if (!seen[u] && (b(v, u) != 0 || b(u, v) != 0)) {
                seen[u] = true;
                ++count;
                stack.push_back(u);
            }
    }
    return count == n;
}

bool is_connected(const Quiver& q) {
    // Arrows, not b: a 2-cycle has b = 0 but still connects its endpoints.
    ExchangeMatrix adj(q.size());
    for (const auto& a : q.arrows()) adj(a.src, a.tgt) = 1;
    return is_connected(adj);
}

namespace {

bool acyclic_adjacency(int n, const std::function<bool(int, int)>& edge) {
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (edge(i, j)) ++indeg[j];
    std::vector<int> ready;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    int removed = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++removed;
        for (int j = 0; j < n; ++j)
            if (edge(v, j) && --indeg[j] == 0) ready.push_back(j);
    }
    return removed == n;
}

} // namespace

bool is_acyclic(const ExchangeMatrix& b) {
    return acyclic_adjacency(b.size(), [&](int i, int j) { return b(i, j) > 0; });
}

bool is_acyclic(const Quiver& q) {
    const int n = q.size();
    std::vector<char> edge(std::size_t(n) * std::size_t(n), 0);
    for (const auto& a : q.arrows()) edge[std::size_t(a.src) * n + a.tgt] = 1;
    return acyclic_adjacency(n, [&](int i, int j) { return edge[std::size_t(i) * n + j] != 0; });
}

ExchangeMatrix relabel(const ExchangeMatrix& m, std::span<const int> perm) {
    ExchangeMatrix out(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) out(perm[i], perm[j]) = m(i, j);
    return out;
}

namespace {

// Color refinement: colors are ranks of refined signatures, so they do not
// depend on the input labeling.
std::vector<int> refine_colors(const ExchangeMatrix& m) {
    const int n = m.size();
    std::vector<int> color(n, 0);
    int ncolors = 1;
    for (;;) {
        std::vector<std::vector<int>> sig(n);
        for (int v = 0; v < n; ++v) {
            std::vector<std::array<int, 3>> nbr;
            for (int u = 0; u < n; ++u)
                if (u != v) nbr.push_back({color[u], m(v, u), m(u, v)});
            std::sort(nbr.begin(), nbr.end());
            sig[v] = {color[v], m(v, v)};
            for (const auto& t : nbr) sig[v].insert(sig[v].end(), t.begin(), t.end());
        }
        std::vector<std::vector<int>> distinct = sig;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (int v = 0; v < n; ++v)
            color[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[v]) - distinct.begin());
        int next = static_cast<int>(distinct.size());
        if (next == ncolors) break;
        ncolors = next;
    }
    return color;
}

struct CanonicalSearch {
    const ExchangeMatrix& m;
    std::vector<int> slot_color; // color required at each position
    std::vector<int> color;
    std::vector<int> perm;
    std::vector<bool> used;
    std::vector<int> key;
    std::vector<int> best_key;
    std::vector<int> best_perm;
    bool have_best = false;

    // Appends the entries contributed by position p; returns the comparison
    // of the extended prefix against best_key (-1, 0, 1).
    void extend(int p) {
        const int v = perm[p];
        for (int q = 0; q < p; ++q) {
            key.push_back(m(v, perm[q]));
            key.push_back(m(perm[q], v));
        }
        key.push_back(m(v, v));
    }

    int compare_prefix(std::size_t from) const {
        for (std::size_t i = from; i < key.size(); ++i) {
            if (key[i] < best_key[i]) return -1;
            if (key[i] > best_key[i]) return 1;
        }
        return 0;
    }

    void run(int p, bool already_smaller) {
        const int n = m.size();
        if (p == n) {
            if (!have_best || already_smaller) {
                best_key = key;
                best_perm = perm;
                have_best = true;
            }
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v] || color[v] != slot_color[p]) continue;
            std::size_t mark = key.size();
            perm[p] = v;
            extend(p);
            bool smaller = already_smaller;
            if (have_best && !already_smaller) {
                int c = compare_prefix(mark);
                if (c > 0) {
                    key.resize(mark);
                    continue;
                }
                smaller = c < 0;
            }
            used[v] = true;
            run(p + 1, smaller || !have_best);
            used[v] = false;
            key.resize(mark);
            // Once a full permutation is recorded with a smaller prefix, later
            // siblings compare against the new best.
            if (smaller && have_best) already_smaller = false;
        }
    }
};

} // namespace

CanonicalForm canonical_form(const ExchangeMatrix& m) {
    const int n = m.size();
    if (n > kMaxCanonicalVertices)
        fail(ErrorCode::SizeGuard, "canonical form limited to " + std::to_string(kMaxCanonicalVertices) + " vertices");
    CanonicalSearch s{m, {}, refine_colors(m), std::vector<int>(n, -1), std::vector<bool>(n, false), {}, {}, {}, false};
    s.slot_color = s.color;
    std::sort(s.slot_color.begin(), s.slot_color.end());
    s.run(0, false);
    CanonicalForm out;
    out.permutation = s.best_perm;
    out.matrix = ExchangeMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.matrix(i, j) = m(out.permutation[i], out.permutation[j]);
    return out;
}

CanonicalForm canonical_form(const Quiver& q) { return canonical_form(q.b()); }

std::string canonical_key(const ExchangeMatrix& canonical) {
    std::string key;
    key.reserve(canonical.data().size() + 1);
    key.push_back(static_cast<char>(canonical.size()));
    for (int x : canonical.data()) key.push_back(static_cast<char>(x));
    return key;
}

} // namespace qpw
