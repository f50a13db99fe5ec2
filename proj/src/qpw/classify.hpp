#pragma once

#include "qpw/quiver.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qpw {

enum class MutationTag { Dynkin, Affine, MutationFiniteOther, MutationInfinite };

/// Series/rank of a catalog diagram. Affine ranks follow the X_n^(1)
/// convention: the diagram has rank + 1 vertices.
struct DiagramType {
    MutationTag kind = MutationTag::Dynkin; // Dynkin or Affine only
    char series = 'A';
    int rank = 0;

    std::string name() const; // "Dynkin A_3", "Affine D_4^(1)"
    friend bool operator==(const DiagramType&, const DiagramType&) = default;
};

struct MutationType {
    MutationTag tag = MutationTag::MutationInfinite;
    std::optional<DiagramType> diagram;          // set for Dynkin and Affine
    std::vector<int> witness_sequence;           // 0-based mutation vertices
    std::optional<ExchangeMatrix> representative; // acyclic catalog match
    std::size_t visited = 0;

    std::string name() const;
};

enum class AbortReason { EntryGE2, EntryGE3, Budget };
const char* abort_reason_name(AbortReason r);

struct ClassReport {
    std::size_t visited = 0;
    std::optional<AbortReason> abort_reason;
    std::vector<ExchangeMatrix> representatives; // canonical matrices, bounded sample
    int max_abs_entry = 0;
};

struct BfsOptions {
    std::size_t budget = 200000;
    bool stop_on_entry_ge2 = false;
    std::size_t sample_size = 16;
};

inline constexpr std::size_t kDefaultClassBudget = 200000;

/// Breadth-first closure of the mutation class, deduplicated by canonical
/// form. Stops early once an entry of absolute value >= 3 appears (or >= 2
/// with stop_on_entry_ge2), or when the budget is exhausted.
ClassReport mutation_class_bfs(const Quiver& q, const BfsOptions& options = {});

/// Underlying diagram (edge multiplicity |b_ij|) of an acyclic exchange
/// matrix, matched against the Dynkin and affine catalogs.
std::optional<DiagramType> match_catalog(const ExchangeMatrix& acyclic);

/// Symmetric adjacency matrix of a catalog diagram.
ExchangeMatrix catalog_diagram(const DiagramType& type);

/// All catalog diagrams with at most max_vertices vertices.
std::vector<DiagramType> catalog_entries(int max_vertices);

/// Throws Disconnected, TwoCycle, or BudgetExceeded.
MutationType classify(const Quiver& q, std::size_t budget = kDefaultClassBudget);

/// Smallest vertex subset (ties lexicographic) whose full subquiver is
/// connected and of affine type, or is a 2-vertex subquiver with >= 3
/// arrows. Empty iff the quiver is of Dynkin type.
std::optional<std::vector<int>> find_non_dynkin_core(const Quiver& q);

/// Visits every qualifying core in the same order as find_non_dynkin_core
/// until `visit` returns true.
void visit_non_dynkin_cores(const Quiver& q, const std::function<bool(const std::vector<int>&)>& visit);

} // namespace qpw
