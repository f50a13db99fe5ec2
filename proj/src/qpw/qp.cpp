#include "qpw/qp.hpp"

#include "qpw/error.hpp"
#include "qpw/linalg.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>

namespace qpw {

namespace {

using ArrowIndex = std::unordered_map<std::string, const Arrow*>;

ArrowIndex index_arrows(const Quiver& q) {
    ArrowIndex idx;
    for (const auto& a : q.arrows()) idx.emplace(a.id, &a);
    return idx;
}

const Arrow& lookup(const ArrowIndex& idx, const std::string& id) {
    auto it = idx.find(id);
    if (it == idx.end()) fail(ErrorCode::NotFound, "unknown arrow '" + id + "'");
    return *it->second;
}

Word rotate(const Word& w, std::size_t r) {
    Word out;
    out.reserve(w.size());
    out.insert(out.end(), w.begin() + r, w.end());
    out.insert(out.end(), w.begin(), w.begin() + r);
    return out;
}

Word min_rotation(const Word& w) {
    Word best = w;
    for (std::size_t r = 1; r < w.size(); ++r) {
        Word cand = rotate(w, r);
        if (cand < best) best = std::move(cand);
    }
    return best;
}

bool contains_arrow(const Word& w, const std::set<std::string>& arrows) {
    for (const auto& a : w)
        if (arrows.count(a)) return true;
    return false;
}

} // namespace

void PathCombination::add(const Word& w, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms.erase(it);
    }
}

std::size_t PathCombination::min_length() const {
    std::size_t m = SIZE_MAX;
    for (const auto& [w, c] : terms) m = std::min(m, w.size());
    return m;
}

std::pair<int, int> path_endpoints(const Quiver& q, const Word& w) {
    if (w.empty()) fail(ErrorCode::InvalidArgument, "empty path has no arrow endpoints");
    const Arrow* prev = &q.arrow(w.front());
    const int src = prev->src;
    for (std::size_t i = 1; i < w.size(); ++i) {
        const Arrow& a = q.arrow(w[i]);
        if (a.src != prev->tgt)
            fail(ErrorCode::InvalidArgument, "arrows '" + prev->id + "' and '" + a.id + "' do not compose");
        prev = &a;
    }
    return {src, prev->tgt};
}

PathCombination single_path(const Quiver& q, const Word& w, const Rational& c) {
    auto [s, t] = path_endpoints(q, w);
    PathCombination p{s, t, {}};
    p.add(w, c);
    return p;
}

Word normalize_cycle(const Quiver& q, const Word& w) {
    auto [s, t] = path_endpoints(q, w);
    if (s != t) fail(ErrorCode::InvalidArgument, "word is not a closed path");
    return min_rotation(w);
}

Potential::Potential(int truncation) : truncation_(truncation) {
    if (truncation < 1) fail(ErrorCode::InvalidArgument, "truncation degree must be positive");
}

void Potential::add_normalized(const Word& w, const Rational& c) {
    if (sgn(c) == 0) return;
    if (static_cast<int>(w.size()) > truncation_) {
        truncated_ = true;
        return;
    }
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

void Potential::add_cycle(const Quiver& q, const Word& w, const Rational& c) {
    add_normalized(normalize_cycle(q, w), c);
}

bool QuiverWithPotential::is_reduced() const {
    for (const auto& [w, c] : potential.terms())
        if (w.size() <= 2) return false;
    return true;
}

PathCombination cyclic_derivative(const QuiverWithPotential& p, const std::string& arrow) {
    const Arrow& alpha = p.quiver.arrow(arrow);
    PathCombination out{alpha.tgt, alpha.src, {}};
    const std::size_t limit = static_cast<std::size_t>(p.potential.truncation() - 1);
    for (const auto& [w, c] : p.potential.terms()) {
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            if (w[pos] != arrow) continue;
            // w = u alpha v  ->  v u
            Word vu(w.begin() + pos + 1, w.end());
            vu.insert(vu.end(), w.begin(), w.begin() + pos);
            if (vu.size() <= limit) out.add(vu, c);
        }
    }
    return out;
}

QuiverWithPotential restrict_to(const QuiverWithPotential& p, std::span<const int> vertices) {
    QuiverWithPotential out{full_subquiver(p.quiver, vertices), Potential(p.potential.truncation())};
    std::set<std::string> kept;
    for (const auto& a : out.quiver.arrows()) kept.insert(a.id);
    for (const auto& [w, c] : p.potential.terms()) {
        bool inside = std::all_of(w.begin(), w.end(), [&](const std::string& a) { return kept.count(a) > 0; });
        if (inside) out.potential.add_normalized(w, c);
    }
    return out;
}

QuiverWithPotential direct_sum(const QuiverWithPotential& a, const QuiverWithPotential& b) {
    if (a.quiver.size() != b.quiver.size())
        fail(ErrorCode::InvalidArgument, "direct sum requires the same vertex set");
    std::vector<Arrow> arrows = a.quiver.arrows();
    for (const auto& x : b.quiver.arrows()) {
        if (a.quiver.arrow_index(x.id))
            fail(ErrorCode::InvalidArgument, "direct sum requires disjoint arrow sets ('" + x.id + "' repeated)");
        arrows.push_back(x);
    }
    QuiverWithPotential out{build_quiver(a.quiver.size(), std::move(arrows), a.quiver.labels()),
                            Potential(std::max(a.potential.truncation(), b.potential.truncation()))};
    for (const auto& [w, c] : a.potential.terms()) out.potential.add_normalized(w, c);
    for (const auto& [w, c] : b.potential.terms()) out.potential.add_normalized(w, c);
    return out;
}

namespace {

void check_images(const Quiver& q, const RightEquivalence& phi) {
    for (const auto& [id, image] : phi) {
        const Arrow& a = q.arrow(id);
        if (image.src != a.src || image.tgt != a.tgt)
            fail(ErrorCode::InvalidArgument, "image of '" + id + "' changes endpoints");
        for (const auto& [w, c] : image.terms) {
            if (w.empty()) fail(ErrorCode::InvalidArgument, "image of '" + id + "' has a constant term");
            auto [s, t] = path_endpoints(q, w);
            if (s != a.src || t != a.tgt)
                fail(ErrorCode::InvalidArgument, "image of '" + id + "' contains a path with wrong endpoints");
        }
    }
}

void check_first_order_invertible(const Quiver& q, const RightEquivalence& phi) {
    // Group parallel arrows and test the degree-1 coefficient matrix.
    std::map<std::pair<int, int>, std::vector<std::string>> groups;
    for (const auto& a : q.arrows()) groups[{a.src, a.tgt}].push_back(a.id);
    for (const auto& [ends, ids] : groups) {
        bool touched = std::any_of(ids.begin(), ids.end(), [&](const std::string& id) { return phi.count(id) > 0; });
        if (!touched) continue;
        const int m = static_cast<int>(ids.size());
        Matrix<Rational> lin(m, m);
        for (int r = 0; r < m; ++r) {
            auto it = phi.find(ids[r]);
            if (it == phi.end()) {
                lin(r, r) = 1;
                continue;
            }
            for (int c = 0; c < m; ++c) {
                auto t = it->second.terms.find(Word{ids[c]});
                if (t != it->second.terms.end()) lin(r, c) = t->second;
            }
        }
        if (rank(lin) < m) fail(ErrorCode::Domain, "right equivalence is singular to first order");
    }
}

// Product of path combinations, truncated at `limit` path length.
void multiply_into(std::map<Word, Rational>& acc, const std::map<Word, Rational>& left,
                   const std::map<Word, Rational>& right, std::size_t limit, bool& dropped) {
    for (const auto& [lw, lc] : left)
        for (const auto& [rw, rc] : right) {
            if (lw.size() + rw.size() > limit) {
                dropped = true;
                continue;
            }
            Word w = lw;
            w.insert(w.end(), rw.begin(), rw.end());
            Rational c = lc * rc;
            auto [it, inserted] = acc.emplace(std::move(w), c);
            if (!inserted) {
                it->second += c;
                if (sgn(it->second) == 0) acc.erase(it);
            }
        }
}

} // namespace

Potential substitute(const Quiver& q, const Potential& w, const RightEquivalence& phi) {
    const std::size_t limit = static_cast<std::size_t>(w.truncation());
    Potential out(w.truncation());
    if (w.truncated()) out.mark_truncated();
    bool dropped = false;
    for (const auto& [word, coef] : w.terms()) {
        std::map<Word, Rational> acc{{Word{}, coef}};
        for (const auto& a : word) {
            auto it = phi.find(a);
            std::map<Word, Rational> image;
            if (it == phi.end())
                image.emplace(Word{a}, Rational(1));
            else
                image = it->second.terms;
            std::map<Word, Rational> next;
            multiply_into(next, acc, image, limit, dropped);
            acc = std::move(next);
            if (acc.empty()) break;
        }
        for (const auto& [cyc, c] : acc) out.add_normalized(min_rotation(cyc), c);
    }
    if (dropped) out.mark_truncated();
    (void)q;
    return out;
}

QuiverWithPotential apply_right_equivalence(const QuiverWithPotential& p, const RightEquivalence& phi) {
    check_images(p.quiver, phi);
    check_first_order_invertible(p.quiver, phi);
    return {p.quiver, substitute(p.quiver, p.potential, phi)};
}

QuiverWithPotential premutate(const QuiverWithPotential& p, int k) {
    const Quiver& q = p.quiver;
    if (k < 0 || k >= q.size())
        fail(ErrorCode::OutOfRange, "mutation vertex " + std::to_string(k + 1) + " out of range");
    if (q.vertex_on_two_cycle(k))
        fail(ErrorCode::TwoCycle, "vertex " + std::to_string(k + 1) + " lies on a 2-cycle");

    std::set<std::string> ids;
    for (const auto& a : q.arrows()) ids.insert(a.id);
    auto fresh = [&](std::string id) {
        while (ids.count(id)) id += "'";
        ids.insert(id);
        return id;
    };

    std::vector<const Arrow*> incoming, outgoing;
    for (const auto& a : q.arrows()) {
        if (a.tgt == k) incoming.push_back(&a);
        if (a.src == k) outgoing.push_back(&a);
    }

    std::vector<Arrow> arrows;
    std::map<std::string, std::string> star;
    for (const auto& a : q.arrows()) {
        if (a.src == k || a.tgt == k) {
            std::string s = fresh(a.id + "*");
            star[a.id] = s;
            arrows.push_back({s, a.tgt, a.src});
        } else {
            arrows.push_back(a);
        }
    }
    std::map<std::pair<std::string, std::string>, std::string> composite;
    for (const Arrow* a : incoming)
        for (const Arrow* b : outgoing) {
            std::string id = fresh("[" + a->id + b->id + "]");
            composite[{a->id, b->id}] = id;
            arrows.push_back({id, a->src, b->tgt});
        }

    QuiverWithPotential out{build_quiver(q.size(), std::move(arrows), q.labels()), Potential(p.potential.truncation())};
    if (p.potential.truncated()) out.potential.mark_truncated();
    auto idx = index_arrows(q);

    for (const auto& [w, c] : p.potential.terms()) {
        // Rotate so the cycle does not start (hence not end) at k.
        std::size_t r = 0;
        while (r < w.size() && lookup(idx, w[r]).src == k) ++r;
        if (r == w.size()) fail(ErrorCode::Loop, "potential term supported at a single vertex");
        Word rw = rotate(w, r);
        Word nw;
        for (std::size_t i = 0; i < rw.size(); ++i) {
            if (lookup(idx, rw[i]).tgt == k) {
                nw.push_back(composite.at({rw[i], rw[i + 1]}));
                ++i;
            } else {
                nw.push_back(rw[i]);
            }
        }
        out.potential.add_cycle(out.quiver, nw, c);
    }
    for (const Arrow* a : incoming)
        for (const Arrow* b : outgoing)
            out.potential.add_cycle(out.quiver, {composite.at({a->id, b->id}), star.at(b->id), star.at(a->id)}, 1);
    return out;
}

namespace {

struct TrivialArrows {
    std::vector<std::pair<std::string, std::string>> pairs; // (x, y)
    std::map<std::string, std::size_t> x_index;
    std::map<std::string, std::size_t> y_index;
    std::set<std::string> all;
};

// Linear change among parallel arrows bringing the degree-2 part to a sum of
// disjoint 2-cycles x_s y_s.
RightEquivalence diagonalize_quadratic(const Quiver& q, const Potential& w, TrivialArrows& trivial) {
    RightEquivalence phi;
    auto idx = index_arrows(q);
    std::map<std::pair<int, int>, bool> has_quadratic;
    for (const auto& [word, c] : w.terms()) {
        if (word.size() == 1) fail(ErrorCode::Loop, "potential has a loop term");
        if (word.size() != 2) continue;
        const Arrow& a = lookup(idx, word[0]);
        has_quadratic[{std::min(a.src, a.tgt), std::max(a.src, a.tgt)}] = true;
    }
    for (const auto& [pair, unused] : has_quadratic) {
        auto [i, j] = pair;
        std::vector<std::string> xs, ys;
        for (const auto& a : q.arrows()) {
            if (a.src == i && a.tgt == j) xs.push_back(a.id);
            if (a.src == j && a.tgt == i) ys.push_back(a.id);
        }
        const int p = static_cast<int>(xs.size()), r = static_cast<int>(ys.size());
        Matrix<Rational> c(p, r);
        for (int s = 0; s < p; ++s)
            for (int t = 0; t < r; ++t) {
                auto it = w.terms().find(min_rotation(Word{xs[s], ys[t]}));
                if (it != w.terms().end()) c(s, t) = it->second;
            }
        auto nf = rank_normal_form(c);
        // phi(x_s) = sum_{s'} E[s'][s] x_{s'},  phi(y_t) = sum_{t'} G[t][t'] y_{t'}
        for (int s = 0; s < p; ++s) {
            PathCombination img{i, j, {}};
            for (int s2 = 0; s2 < p; ++s2) img.add(Word{xs[s2]}, nf.left(s2, s));
            if (!(img.terms.size() == 1 && img.terms.begin()->first == Word{xs[s]} && img.terms.begin()->second == 1))
                phi[xs[s]] = img;
        }
        for (int t = 0; t < r; ++t) {
            PathCombination img{j, i, {}};
            for (int t2 = 0; t2 < r; ++t2) img.add(Word{ys[t2]}, nf.right(t, t2));
            if (!(img.terms.size() == 1 && img.terms.begin()->first == Word{ys[t]} && img.terms.begin()->second == 1))
                phi[ys[t]] = img;
        }
        for (int s = 0; s < nf.rank; ++s) {
            trivial.x_index[xs[s]] = trivial.pairs.size();
            trivial.y_index[ys[s]] = trivial.pairs.size();
            trivial.pairs.emplace_back(xs[s], ys[s]);
            trivial.all.insert(xs[s]);
            trivial.all.insert(ys[s]);
        }
    }
    return phi;
}

} // namespace

Reduction reduce(const QuiverWithPotential& p) {
    const Quiver& q = p.quiver;
    const int n_trunc = p.potential.truncation();
    Reduction out;
    TrivialArrows trivial;
    Potential w = p.potential;

    RightEquivalence linear = diagonalize_quadratic(q, w, trivial);
    if (!linear.empty()) {
        w = substitute(q, w, linear);
        out.steps.push_back(linear);
    }

    auto idx = index_arrows(q);
    if (!trivial.pairs.empty()) {
        for (int d = 3; d <= n_trunc; ++d) {
            // u_s collects cycles x_s u_s, v_s collects cycles v_s y_s.
            std::map<std::size_t, PathCombination> u, v;
            for (const auto& [word, c] : w.terms()) {
                if (static_cast<int>(word.size()) != d) continue;
                for (std::size_t pos = 0; pos < word.size(); ++pos) {
                    if (auto xi = trivial.x_index.find(word[pos]); xi != trivial.x_index.end()) {
                        Word rest = rotate(word, pos);
                        rest.erase(rest.begin());
                        const Arrow& x = lookup(idx, word[pos]);
                        auto& acc = u.try_emplace(xi->second, PathCombination{x.tgt, x.src, {}}).first->second;
                        acc.add(rest, c);
                        break;
                    }
                    if (auto yi = trivial.y_index.find(word[pos]); yi != trivial.y_index.end()) {
                        Word rest = rotate(word, (pos + 1) % word.size());
                        rest.pop_back();
                        const Arrow& y = lookup(idx, word[pos]);
                        auto& acc = v.try_emplace(yi->second, PathCombination{y.tgt, y.src, {}}).first->second;
                        acc.add(rest, c);
                        break;
                    }
                }
            }
            if (u.empty() && v.empty()) continue;
            RightEquivalence phi;
            for (auto& [s, comb] : v) {
                const auto& x = trivial.pairs[s].first;
                PathCombination img{comb.src, comb.tgt, {}};
                img.add(Word{x}, 1);
                for (const auto& [pw, pc] : comb.terms) img.add(pw, -pc);
                phi[x] = img;
            }
            for (auto& [s, comb] : u) {
                const auto& y = trivial.pairs[s].second;
                PathCombination img{comb.src, comb.tgt, {}};
                img.add(Word{y}, 1);
                for (const auto& [pw, pc] : comb.terms) img.add(pw, -pc);
                phi[y] = img;
            }
            w = substitute(q, w, phi);
            out.steps.push_back(std::move(phi));
            for (const auto& [word, c] : w.terms())
                if (static_cast<int>(word.size()) == d && contains_arrow(word, trivial.all))
                    fail(ErrorCode::Internal, "reduction did not clear degree " + std::to_string(d));
        }
    }

    std::vector<Arrow> red_arrows, tri_arrows;
    for (const auto& a : q.arrows()) (trivial.all.count(a.id) ? tri_arrows : red_arrows).push_back(a);
    out.trivial_pairs = trivial.pairs;
    out.reduced = {build_quiver(q.size(), std::move(red_arrows), q.labels()), Potential(n_trunc)};
    out.trivial = {build_quiver(q.size(), std::move(tri_arrows), q.labels()), Potential(n_trunc)};
    if (w.truncated()) out.reduced.potential.mark_truncated();
    for (const auto& [word, c] : w.terms()) {
        if (!contains_arrow(word, trivial.all)) {
            out.reduced.potential.add_normalized(word, c);
        } else if (word.size() == 2) {
            out.trivial.potential.add_normalized(word, c);
        } else {
            fail(ErrorCode::Internal, "trivial arrow survived reduction in a term of length " +
                                          std::to_string(word.size()));
        }
    }
    for (const auto& [x, y] : trivial.pairs) {
        auto it = out.trivial.potential.terms().find(min_rotation(Word{x, y}));
        if (it == out.trivial.potential.terms().end() || it->second != 1)
            fail(ErrorCode::Internal, "trivial part is not a sum of disjoint 2-cycles");
    }
    return out;
}

QuiverWithPotential qp_mutate(const QuiverWithPotential& p, int k) {
    return reduce(premutate(p, k)).reduced;
}

ProbeReport nondegeneracy_probe(const QuiverWithPotential& p, int depth, int trials, std::uint64_t seed) {
    ProbeReport report;
    report.depth = depth;
    report.trials = trials;
    report.seed = seed;
    const int n = p.quiver.size();
    if (p.quiver.has_two_cycle()) {
        report.pass = false;
        return report;
    }
    if (n < 2 || depth <= 0) return report;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < trials; ++t) {
        QuiverWithPotential cur = p;
        std::vector<int> seq;
        int prev = -1;
        for (int step = 0; step < depth; ++step) {
            int k;
            do {
                k = pick(rng);
            } while (k == prev);
            prev = k;
            seq.push_back(k);
            cur = qp_mutate(cur, k);
            if (cur.quiver.has_two_cycle()) {
                report.pass = false;
                report.failing_sequence = seq;
                return report;
            }
        }
    }
    return report;
}

} // namespace qpw
