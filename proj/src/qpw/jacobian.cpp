#include "qpw/jacobian.hpp"

#include "qpw/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace qpw {

std::string FinDimCert::name() const {
    if (finite()) return "FiniteDim(" + std::to_string(total_dim) + ")";
    return "UndeterminedAtTruncation(" + std::to_string(truncation) + ")";
}

std::vector<PathCombination> jacobian_ideal_generators(const QuiverWithPotential& p) {
    std::vector<PathCombination> gens;
    gens.reserve(p.quiver.arrows().size());
    for (const auto& a : p.quiver.arrows()) gens.push_back(cyclic_derivative(p, a.id));
    return gens;
}

namespace {

void subtract_scaled(std::map<int, Rational>& v, const std::map<int, Rational>& row, const Rational& c) {
    for (const auto& [col, rc] : row) {
        auto [it, inserted] = v.emplace(col, -c * rc);
        if (!inserted) {
            it->second -= c * rc;
            if (sgn(it->second) == 0) v.erase(it);
        }
    }
}

} // namespace

class QuotientBuilder {
public:
    QuotientBuilder(TruncatedAlgebra& alg, int degree) : a_(alg), degree_(degree) {}

    void run() {
        enumerate_paths();
        close_ideal();
        count_layers();
    }

    std::vector<std::size_t> layers;

private:
    void enumerate_paths() {
        const Quiver& q = a_.qp_.quiver;
        std::vector<int> order(q.arrows().size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return q.arrows()[x].id < q.arrows()[y].id; });

        auto push = [&](Path p) {
            if (a_.paths_.size() >= kMaxStoredPaths)
                fail(ErrorCode::SizeGuard, "truncated path algebra exceeds " + std::to_string(kMaxStoredPaths) +
                                               " paths; lower the truncation degree");
            a_.column_of_.emplace(std::make_pair(p.src, p.arrows), static_cast<int>(a_.paths_.size()));
            a_.paths_.push_back(std::move(p));
        };
        for (int v = 0; v < q.size(); ++v) push({v, v, {}});
        std::size_t begin = 0;
        for (int d = 1; d <= degree_; ++d) {
            std::size_t end = a_.paths_.size();
            for (std::size_t i = begin; i < end; ++i) {
                for (int ai : order) {
                    const Arrow& arr = q.arrows()[ai];
                    if (arr.src != a_.paths_[i].tgt) continue;
                    Path p{a_.paths_[i].src, arr.tgt, a_.paths_[i].arrows};
                    p.arrows.push_back(ai);
                    push(std::move(p));
                }
            }
            begin = end;
        }
        a_.pivot_row_.assign(a_.paths_.size(), -1);
    }

    std::optional<int> column(int src, const std::vector<int>& arrows) const {
        auto it = a_.column_of_.find({src, arrows});
        if (it == a_.column_of_.end()) return std::nullopt;
        return it->second;
    }

    std::map<int, Rational> from_combination(const PathCombination& c) const {
        std::map<int, Rational> v;
        const Quiver& q = a_.qp_.quiver;
        for (const auto& [w, coef] : c.terms) {
            if (static_cast<int>(w.size()) > degree_) continue;
            std::vector<int> arrows;
            for (const auto& id : w) arrows.push_back(static_cast<int>(*q.arrow_index(id)));
            v.emplace(*column(c.src, arrows), coef);
        }
        return v;
    }

    std::map<int, Rational> left_times(int arrow, const std::map<int, Rational>& v) const {
        const Arrow& a = a_.qp_.quiver.arrows()[arrow];
        std::map<int, Rational> out;
        for (const auto& [col, c] : v) {
            const Path& p = a_.paths_[col];
            if (p.src != a.tgt || static_cast<int>(p.length()) + 1 > degree_) continue;
            std::vector<int> arrows{arrow};
            arrows.insert(arrows.end(), p.arrows.begin(), p.arrows.end());
            out.emplace(*column(a.src, arrows), c);
        }
        return out;
    }

    std::map<int, Rational> right_times(const std::map<int, Rational>& v, int arrow) const {
        const Arrow& a = a_.qp_.quiver.arrows()[arrow];
        std::map<int, Rational> out;
        for (const auto& [col, c] : v) {
            const Path& p = a_.paths_[col];
            if (p.tgt != a.src || static_cast<int>(p.length()) + 1 > degree_) continue;
            std::vector<int> arrows = p.arrows;
            arrows.push_back(arrow);
            out.emplace(*column(p.src, arrows), c);
        }
        return out;
    }

    void close_ideal() {
        std::deque<std::map<int, Rational>> queue;
        for (const auto& g : a_.generators_) {
            auto v = from_combination(g);
            if (!v.empty()) queue.push_back(std::move(v));
        }
        const int arrows = static_cast<int>(a_.qp_.quiver.arrows().size());
        while (!queue.empty()) {
            std::map<int, Rational> v = std::move(queue.front());
            queue.pop_front();
            v = a_.normal_form(std::move(v));
            if (v.empty()) continue;
            Rational lead = v.begin()->second;
            for (auto& [col, c] : v) c /= lead;
            a_.pivot_row_[v.begin()->first] = static_cast<int>(a_.rows_.size());
            for (int ai = 0; ai < arrows; ++ai) {
                auto l = left_times(ai, v);
                if (!l.empty()) queue.push_back(std::move(l));
                auto r = right_times(v, ai);
                if (!r.empty()) queue.push_back(std::move(r));
            }
            a_.rows_.push_back(std::move(v));
        }
    }

    void count_layers() {
        layers.assign(degree_ + 1, 0);
        for (std::size_t col = 0; col < a_.paths_.size(); ++col)
            if (a_.pivot_row_[col] < 0) ++layers[a_.paths_[col].length()];
    }

    TruncatedAlgebra& a_;
    int degree_;
};

AlgebraElement TruncatedAlgebra::normal_form(AlgebraElement x) const {
    std::erase_if(x, [](const auto& kv) { return sgn(kv.second) == 0; });
    auto it = x.begin();
    while (it != x.end()) {
        const int col = it->first;
        const int r = pivot_row_[col];
        if (r < 0) {
            ++it;
            continue;
        }
        Rational c = it->second;
        subtract_scaled(x, rows_[r], c);
        it = x.upper_bound(col);
    }
    return x;
}

Word TruncatedAlgebra::path_word(int col) const {
    Word w;
    for (int a : paths_[col].arrows) w.push_back(qp_.quiver.arrows()[a].id);
    return w;
}

std::optional<int> TruncatedAlgebra::path_column(const Path& p) const {
    auto it = column_of_.find({p.src, p.arrows});
    if (it == column_of_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> TruncatedAlgebra::basis_between(int src, int tgt) const {
    std::vector<int> out;
    for (int col : basis_)
        if (paths_[col].src == src && paths_[col].tgt == tgt) out.push_back(col);
    return out;
}

AlgebraElement TruncatedAlgebra::element(const PathCombination& c) const {
    AlgebraElement v;
    for (const auto& [w, coef] : c.terms) {
        if (w.empty()) {
            v[*path_column({c.src, c.src, {}})] += coef;
            continue;
        }
        std::vector<int> arrows;
        for (const auto& id : w) arrows.push_back(static_cast<int>(*qp_.quiver.arrow_index(id)));
        auto col = path_column({c.src, c.tgt, arrows});
        if (!col) continue; // longer than the working degree: zero or truncated
        v[*col] += coef;
    }
    for (auto it = v.begin(); it != v.end();) it = sgn(it->second) == 0 ? v.erase(it) : std::next(it);
    return normal_form(std::move(v));
}

AlgebraElement TruncatedAlgebra::element(const Word& w) const {
    if (w.empty()) fail(ErrorCode::InvalidArgument, "use idempotent() for trivial paths");
    return element(single_path(qp_.quiver, w));
}

AlgebraElement TruncatedAlgebra::idempotent(int vertex) const {
    if (vertex < 0 || vertex >= qp_.quiver.size()) fail(ErrorCode::OutOfRange, "vertex out of range");
    return {{*path_column({vertex, vertex, {}}), Rational(1)}};
}

AlgebraElement TruncatedAlgebra::multiply(const AlgebraElement& x, const AlgebraElement& y, bool* dropped) const {
    AlgebraElement out;
    bool lost = false;
    for (const auto& [cx, ax] : x) {
        const Path& p = paths_[cx];
        for (const auto& [cy, ay] : y) {
            const Path& q = paths_[cy];
            if (p.tgt != q.src) continue;
            std::vector<int> arrows = p.arrows;
            arrows.insert(arrows.end(), q.arrows.begin(), q.arrows.end());
            auto col = path_column({p.src, q.tgt, arrows});
            if (!col) {
                lost = true;
                continue;
            }
            auto [it, inserted] = out.emplace(*col, ax * ay);
            if (!inserted) {
                it->second += ax * ay;
                if (sgn(it->second) == 0) out.erase(it);
            }
        }
    }
    // Beyond a vanishing layer every long path lies in the ideal.
    if (dropped) *dropped = lost && !cert_.finite();
    return normal_form(std::move(out));
}

std::map<std::pair<int, int>, AlgebraElement> TruncatedAlgebra::mult_table() const {
    std::map<std::pair<int, int>, AlgebraElement> table;
    for (int s : basis_)
        for (int t : basis_) {
            if (paths_[s].tgt != paths_[t].src) continue;
            auto prod = multiply({{s, Rational(1)}}, {{t, Rational(1)}});
            if (!prod.empty()) table.emplace(std::make_pair(s, t), std::move(prod));
        }
    return table;
}

TruncatedAlgebra truncated_quotient(const QuiverWithPotential& p, int n) {
    if (n < 2) fail(ErrorCode::InvalidArgument, "truncation degree must be at least 2");
    TruncatedAlgebra alg;
    for (int degree = 1; degree <= n; ++degree) {
        alg = TruncatedAlgebra();
        alg.qp_ = p;
        alg.truncation_ = n;
        alg.working_ = degree;
        alg.generators_ = jacobian_ideal_generators(p);
        QuotientBuilder builder(alg, degree);
        builder.run();
        const bool vanished = builder.layers[degree] == 0;
        if ((vanished && degree < n) || degree == n) {
            alg.cert_.truncation = n;
            if (vanished && degree < n) {
                alg.cert_.status = FinDimCert::Status::FiniteDim;
                alg.cert_.vanishing_degree = degree;
                alg.cert_.total_dim = std::accumulate(builder.layers.begin(), builder.layers.end(), std::size_t{0});
            } else if (vanished) {
                alg.cert_.vanishing_degree = degree;
            }
            alg.graded_ = builder.layers;
            for (std::size_t col = 0; col < alg.paths_.size(); ++col)
                if (alg.pivot_row_[col] < 0) alg.basis_.push_back(static_cast<int>(col));
            break;
        }
    }
    return alg;
}

} // namespace qpw
