#pragma once

// Quivers with potentials over Q, truncated at a path-length bound N.
//
// Paths are words of arrow ids read left to right: "ab" means a, then b.
// Potentials are stored modulo cyclic rotation, each cycle in its
// lexicographically minimal rotation (comparing arrow ids as strings).

#include "qpw/quiver.hpp"
#include "qpw/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qpw {

using Word = std::vector<std::string>;

inline constexpr int kDefaultTruncation = 12;

/// Linear combination of parallel paths (all from `src` to `tgt`). The empty
/// word stands for the idempotent e_src (only when src == tgt).
struct PathCombination {
    int src = 0;
    int tgt = 0;
    std::map<Word, Rational> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const Word& w, const Rational& c);
    std::size_t min_length() const;

    friend bool operator==(const PathCombination&, const PathCombination&) = default;
};

PathCombination single_path(const Quiver& q, const Word& w, const Rational& c = 1);

/// (src, tgt) of a nonempty path; throws when consecutive arrows do not compose.
std::pair<int, int> path_endpoints(const Quiver& q, const Word& w);

/// Minimal rotation of a closed path. Throws InvalidArgument if not closed.
Word normalize_cycle(const Quiver& q, const Word& w);

class Potential {
public:
    explicit Potential(int truncation = kDefaultTruncation);

    int truncation() const { return truncation_; }
    bool truncated() const { return truncated_; }
    const std::map<Word, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds c * (cycle w); w is normalized; longer than N is dropped and recorded.
    void add_cycle(const Quiver& q, const Word& w, const Rational& c);

    /// Adds an already normalized cycle without validation.
    void add_normalized(const Word& w, const Rational& c);

    void mark_truncated() { truncated_ = true; }

    friend bool operator==(const Potential& a, const Potential& b) {
        return a.truncation_ == b.truncation_ && a.terms_ == b.terms_;
    }

private:
    std::map<Word, Rational> terms_;
    int truncation_;
    bool truncated_ = false;
};

struct QuiverWithPotential {
    Quiver quiver;
    Potential potential;

    /// No term of length <= 2.
    bool is_reduced() const;

    friend bool operator==(const QuiverWithPotential&, const QuiverWithPotential&) = default;
};

/// d/d(arrow) W = sum over factorizations c = u arrow v of v u; truncated at N-1.
PathCombination cyclic_derivative(const QuiverWithPotential& p, const std::string& arrow);

/// Restriction to a vertex subset: full subquiver, cycles leaving it deleted.
QuiverWithPotential restrict_to(const QuiverWithPotential& p, std::span<const int> vertices);

/// Arrow-disjoint union over the same vertex set, potentials added.
QuiverWithPotential direct_sum(const QuiverWithPotential& a, const QuiverWithPotential& b);

/// Images of arrows; arrows absent from the map are fixed.
using RightEquivalence = std::map<std::string, PathCombination>;

/// Rewrites the potential through the algebra map determined by `phi`.
/// Validates endpoints and first-order invertibility.
QuiverWithPotential apply_right_equivalence(const QuiverWithPotential& p, const RightEquivalence& phi);

/// Same substitution without the invertibility check (used internally by
/// reduction, where invertibility holds by construction).
Potential substitute(const Quiver& q, const Potential& w, const RightEquivalence& phi);

/// Premutation at k (0-based). New arrows: composites "[ab]" for a -> k -> b,
/// and reversed "a*" for arrows incident to k.
QuiverWithPotential premutate(const QuiverWithPotential& p, int k);

struct Reduction {
    std::vector<std::pair<std::string, std::string>> trivial_pairs;
    QuiverWithPotential trivial;
    QuiverWithPotential reduced;
    /// Applied in order to the input potential, these produce
    /// trivial.potential + reduced.potential.
    std::vector<RightEquivalence> steps;
};

Reduction reduce(const QuiverWithPotential& p);

QuiverWithPotential qp_mutate(const QuiverWithPotential& p, int k);

struct ProbeReport {
    bool pass = true;
    std::vector<int> failing_sequence; // 0-based
    int trials = 0;
    int depth = 0;
    std::uint64_t seed = 0;
};

/// Random QP-mutation sequences; fails at the first quiver with a 2-cycle.
/// A pass is evidence, not a proof of non-degeneracy.
ProbeReport nondegeneracy_probe(const QuiverWithPotential& p, int depth, int trials, std::uint64_t seed);

} // namespace qpw
