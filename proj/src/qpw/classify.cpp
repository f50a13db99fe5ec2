#include "qpw/classify.hpp"

#include "qpw/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <functional>
#include <unordered_set>

namespace qpw {

std::string DiagramType::name() const {
    std::string s = (kind == MutationTag::Dynkin ? "Dynkin " : "Affine ");
    s += series;
    s += "_" + std::to_string(rank);
    if (kind == MutationTag::Affine) s += "^(1)";
    return s;
}

std::string MutationType::name() const {
    switch (tag) {
    case MutationTag::Dynkin:
    case MutationTag::Affine: return diagram->name();
    case MutationTag::MutationFiniteOther: return "MutationFiniteOther";
    case MutationTag::MutationInfinite: return "MutationInfinite";
    }
    return "unknown";
}

const char* abort_reason_name(AbortReason r) {
    switch (r) {
    case AbortReason::EntryGE2: return "entryGE2";
    case AbortReason::EntryGE3: return "entryGE3";
    case AbortReason::Budget: return "budget";
    }
    return "unknown";
}

namespace {

void add_edge(ExchangeMatrix& m, int i, int j, int mult = 1) {
    m(i, j) += mult;
    m(j, i) += mult;
}

// Tree with one branch vertex and three arms of the given edge lengths.
ExchangeMatrix star_tree(int arm1, int arm2, int arm3) {
    ExchangeMatrix m(1 + arm1 + arm2 + arm3);
    int next = 1;
    for (int arm : {arm1, arm2, arm3}) {
        int prev = 0;
        for (int s = 0; s < arm; ++s) {
            add_edge(m, prev, next);
            prev = next++;
        }
    }
    return m;
}

ExchangeMatrix path_diagram(int n) {
    ExchangeMatrix m(n);
    for (int i = 0; i + 1 < n; ++i) add_edge(m, i, i + 1);
    return m;
}

} // namespace

ExchangeMatrix catalog_diagram(const DiagramType& t) {
    const int n = t.rank;
    if (t.kind == MutationTag::Dynkin) {
        switch (t.series) {
        case 'A':
            if (n >= 1) return path_diagram(n);
            break;
        case 'D':
            if (n >= 4) return star_tree(1, 1, n - 3);
            break;
        case 'E':
            if (n >= 6 && n <= 8) return star_tree(1, 2, n - 4);
            break;
        }
    } else if (t.kind == MutationTag::Affine) {
        switch (t.series) {
        case 'A':
            if (n == 1) {
                ExchangeMatrix m(2);
                add_edge(m, 0, 1, 2);
                return m;
            }
            if (n >= 2) {
                ExchangeMatrix m = path_diagram(n + 1);
                add_edge(m, n, 0);
                return m;
            }
            break;
        case 'D':
            if (n == 4) return [] {
                ExchangeMatrix m(5);
                for (int leaf = 1; leaf <= 4; ++leaf) add_edge(m, 0, leaf);
                return m;
            }();
            if (n > 4) {
                // chain of n-3 vertices, two leaves at each end
                ExchangeMatrix m(n + 1);
                const int chain = n - 3;
                for (int i = 0; i + 1 < chain; ++i) add_edge(m, i, i + 1);
                add_edge(m, 0, chain);
                add_edge(m, 0, chain + 1);
                add_edge(m, chain - 1, chain + 2);
                add_edge(m, chain - 1, chain + 3);
                return m;
            }
            break;
        case 'E':
            if (n == 6) return star_tree(2, 2, 2);
            if (n == 7) return star_tree(1, 3, 3);
            if (n == 8) return star_tree(1, 2, 5);
            break;
        }
    }
    fail(ErrorCode::InvalidArgument, "no catalog diagram " + t.name());
}

std::vector<DiagramType> catalog_entries(int max_vertices) {
    std::vector<DiagramType> out;
    for (int n = 1; n <= max_vertices; ++n) out.push_back({MutationTag::Dynkin, 'A', n});
    for (int n = 4; n <= max_vertices; ++n) out.push_back({MutationTag::Dynkin, 'D', n});
    for (int n = 6; n <= std::min(8, max_vertices); ++n) out.push_back({MutationTag::Dynkin, 'E', n});
    for (int n = 1; n + 1 <= max_vertices; ++n) out.push_back({MutationTag::Affine, 'A', n});
    for (int n = 4; n + 1 <= max_vertices; ++n) out.push_back({MutationTag::Affine, 'D', n});
    for (int n = 6; n <= 8 && n + 1 <= max_vertices; ++n) out.push_back({MutationTag::Affine, 'E', n});
    return out;
}

namespace {

const std::map<std::string, DiagramType>& catalog_index() {
    static const std::map<std::string, DiagramType> index = [] {
        std::map<std::string, DiagramType> idx;
        for (const auto& t : catalog_entries(kMaxCanonicalVertices))
            idx.emplace(canonical_key(canonical_form(catalog_diagram(t)).matrix), t);
        return idx;
    }();
    return index;
}

ExchangeMatrix underlying_diagram(const ExchangeMatrix& b) {
    ExchangeMatrix m(b.size());
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) m(i, j) = std::abs(b(i, j));
    return m;
}

struct BfsNode {
    ExchangeMatrix matrix; // in the input labeling
    int parent = -1;
    int via = -1;
};

std::vector<int> path_to(const std::vector<BfsNode>& nodes, int idx) {
    std::vector<int> seq;
    for (int cur = idx; nodes[cur].parent >= 0; cur = nodes[cur].parent) seq.push_back(nodes[cur].via);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

void require_classifiable(const Quiver& q) {
    if (q.size() == 0) fail(ErrorCode::InvalidArgument, "empty quiver");
    if (q.has_two_cycle()) fail(ErrorCode::TwoCycle, "quiver has a 2-cycle");
}

// Generic breadth-first walk; `on_node` returns true to stop.
// Returns false when the budget ran out first.
bool walk_class(const Quiver& q, std::size_t budget, std::vector<BfsNode>& nodes,
                const std::function<bool(int)>& on_node) {
    std::unordered_set<std::string> seen;
    nodes.clear();
    nodes.push_back({q.b(), -1, -1});
    seen.insert(canonical_key(canonical_form(q.b()).matrix));
    if (on_node(0)) return true;
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        for (int k = 0; k < q.size(); ++k) {
            ExchangeMatrix next = mutate_matrix(nodes[head].matrix, k);
            if (!seen.insert(canonical_key(canonical_form(next).matrix)).second) continue;
            if (nodes.size() >= budget) return false;
            nodes.push_back({std::move(next), static_cast<int>(head), k});
            if (on_node(static_cast<int>(nodes.size() - 1))) return true;
        }
    }
    return true;
}

} // namespace

std::optional<DiagramType> match_catalog(const ExchangeMatrix& acyclic) {
    if (acyclic.size() > kMaxCanonicalVertices) return std::nullopt;
    const auto& idx = catalog_index();
    auto it = idx.find(canonical_key(canonical_form(underlying_diagram(acyclic)).matrix));
    if (it == idx.end()) return std::nullopt;
    return it->second;
}

ClassReport mutation_class_bfs(const Quiver& q, const BfsOptions& options) {
    require_classifiable(q);
    ClassReport report;
    std::vector<BfsNode> nodes;
    bool finished = walk_class(q, options.budget, nodes, [&](int idx) {
        const auto& m = nodes[idx].matrix;
        if (report.representatives.size() < options.sample_size)
            report.representatives.push_back(canonical_form(m).matrix);
        const int e = m.max_abs_entry();
        report.max_abs_entry = std::max(report.max_abs_entry, e);
        if (e >= 3) {
            report.abort_reason = AbortReason::EntryGE3;
            return true;
        }
        if (e >= 2 && options.stop_on_entry_ge2) {
            report.abort_reason = AbortReason::EntryGE2;
            return true;
        }
        return false;
    });
    report.visited = nodes.size();
    if (!finished) report.abort_reason = AbortReason::Budget;
    return report;
}

MutationType classify(const Quiver& q, std::size_t budget) {
    require_classifiable(q);
    if (!is_connected(q)) fail(ErrorCode::Disconnected, "classification requires a connected quiver");
    const int n = q.size();
    MutationType out;
    out.visited = 1;
    if (n <= 2) {
        const int m = n == 1 ? 1 : std::abs(q.b(0, 1));
        if (n == 1 || m == 1) {
            out.tag = MutationTag::Dynkin;
            out.diagram = DiagramType{MutationTag::Dynkin, 'A', n};
            out.representative = q.b();
        } else if (m == 2) {
            out.tag = MutationTag::Affine;
            out.diagram = DiagramType{MutationTag::Affine, 'A', 1};
            out.representative = q.b();
        } else {
            out.tag = MutationTag::MutationInfinite;
        }
        return out;
    }

    std::vector<BfsNode> nodes;
    std::optional<int> hit;
    bool infinite = false;
    bool finished = walk_class(q, budget, nodes, [&](int idx) {
        const auto& m = nodes[idx].matrix;
        if (m.max_abs_entry() >= 3) {
            infinite = true;
            return true;
        }
        if (is_acyclic(m) && match_catalog(m)) {
            hit = idx;
            return true;
        }
        return false;
    });
    out.visited = nodes.size();
    if (infinite) {
        out.tag = MutationTag::MutationInfinite;
        return out;
    }
    if (hit) {
        const auto& m = nodes[*hit].matrix;
        out.diagram = match_catalog(m);
        out.tag = out.diagram->kind;
        out.witness_sequence = path_to(nodes, *hit);
        out.representative = m;
        return out;
    }
    if (!finished)
        fail(ErrorCode::BudgetExceeded,
             "mutation class exceeds budget of " + std::to_string(budget) + " canonical forms");
    out.tag = MutationTag::MutationFiniteOther;
    return out;
}

void visit_non_dynkin_cores(const Quiver& q, const std::function<bool(const std::vector<int>&)>& visit) {
    const int n = q.size();
    for (int size = 2; size <= n; ++size) {
        // lexicographic k-subsets
        std::vector<int> subset(size);
        for (int i = 0; i < size; ++i) subset[i] = i;
        for (;;) {
            Quiver sub = full_subquiver(q, subset);
            bool qualifies = false;
            if (is_connected(sub)) {
                if (size == 2) {
                    qualifies = std::abs(sub.b(0, 1)) >= 2;
                } else {
                    try {
                        qualifies = classify(sub).tag == MutationTag::Affine;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::BudgetExceeded) throw;
                    }
                }
            }
            if (qualifies && visit(subset)) return;
            int i = size - 1;
            while (i >= 0 && subset[i] == n - size + i) --i;
            if (i < 0) break;
            ++subset[i];
            for (int j = i + 1; j < size; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
}

std::optional<std::vector<int>> find_non_dynkin_core(const Quiver& q) {
    if (classify(q).tag == MutationTag::Dynkin) return std::nullopt;
    std::optional<std::vector<int>> found;
    visit_non_dynkin_cores(q, [&](const std::vector<int>& s) {
        found = s;
        return true;
    });
    if (!found) fail(ErrorCode::Internal, "non-Dynkin quiver without an affine or K_m full subquiver");
    return found;
}

} // namespace qpw
