#pragma once

// Witness certificates: for a Jacobi-finite QP of non-Dynkin type, restrict
// to an affine or Kronecker core, build a family of pairwise non-isomorphic
// stable bricks of one dimension vector, and lift it back by zero extension.

#include "qpw/classify.hpp"
#include "qpw/jacobian.hpp"
#include "qpw/representation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qpw {

/// Primitive positive generator of ker(2I - A) for a symmetric adjacency
/// matrix A. Throws Domain when the kernel is not a line with a positive
/// generator.
DimVector null_root(const ExchangeMatrix& diagram);
DimVector null_root(const DiagramType& affine);

/// Symmetric adjacency (|b_ij|) of a quiver's underlying graph.
ExchangeMatrix underlying_graph(const Quiver& q);

enum class FamilyKind { ExactFamily, EvidenceEnumeration };
const char* family_kind_name(FamilyKind k);

struct FamilyInstance {
    Rational parameter;
    Representation rep;
};

struct FieldCount {
    Field field = Field::F2;
    int classes = 0;     // classes with every arrow map of maximal rank
    int all_classes = 0; // every stable brick of the dimension vector
    std::size_t examined = 0;
    bool skipped = false; // over the enumeration cap
};

struct EvidenceReport {
    DimVector d;
    Theta theta;
    std::vector<FieldCount> counts;
    /// One representative per generic-stratum class, per field, in order.
    std::vector<std::vector<Representation>> representatives;
};

struct StableFamily {
    Quiver core;
    DimVector d;
    Theta theta;
    std::string parameter_slots;
    std::vector<FamilyInstance> instances;
    FamilyKind kind = FamilyKind::ExactFamily;
    std::optional<EvidenceReport> evidence;
};

/// Two-vertex core with m >= 2 parallel arrows: the first arrow acts by 1,
/// the second by the parameter, the rest by 0. Parameters must be distinct
/// and nonzero.
StableFamily build_family_kronecker(const Quiver& core, const std::vector<Rational>& parameters);
StableFamily build_family_kronecker(const Quiver& core, int k);
StableFamily build_family_kronecker(int m, int k);

/// Acyclic cycle quiver (underlying graph a single cycle, not cyclically
/// oriented). Thin modules, every arrow 1 except the first which carries the
/// parameter. A two-vertex cycle is handled as the Kronecker case.
StableFamily build_family_affine_A(const Quiver& core, const std::vector<Rational>& parameters);
StableFamily build_family_affine_A(const Quiver& core, int k);

inline constexpr int kDefaultThetaBoundFactor = 2;

/// Smallest max-norm integer theta (ties lexicographic) with <theta, d> = 0
/// and <theta, e> <= -1 for every e in `forbidden`. Bound defaults to 2n.
Theta synthesize_theta(const DimVector& d, const std::vector<DimVector>& forbidden,
                       std::optional<int> bound = std::nullopt);

/// theta_i = delta_i - sum over arrows j -> i of delta_j.
Theta defect_theta(const Quiver& q, const DimVector& delta);

struct LiftedInstance {
    Rational parameter;
    Representation rep;
    bool module_ok = false;
    bool stable = false;
    bool brick = false;
};

struct LiftResult {
    Theta theta;
    std::vector<LiftedInstance> instances;
    bool pairwise_hom_zero = false;
};

/// Extends the family by zero from `subset` to the quiver of `target`, and
/// re-verifies every instance against the target's relations from scratch.
/// Throws VerificationFailed if any check fails.
LiftResult lift(const StableFamily& family, const std::vector<int>& subset, const QuiverWithPotential& target);

inline constexpr std::size_t kMaxEnumeratedReps = 50000;

/// Counts isomorphism classes of theta-stable bricks of dimension vector d
/// over each prime field by exhaustive enumeration. Fields whose search
/// space exceeds kMaxEnumeratedReps are reported as skipped.
EvidenceReport evidence_enumeration(const QuiverWithPotential& p, const DimVector& d, const Theta& theta,
                                    const std::vector<Field>& fields);

struct WitnessOptions {
    int k = 5;
    int probe_depth = 6;
    int probe_trials = 4;
    std::uint64_t seed = 1;
    std::vector<Field> evidence_fields{Field::F2, Field::F3, Field::F5};
    std::function<void(const std::string&)> progress;
};

enum class WitnessStatus { Witness, DynkinNoWitness, Refused, Failed };
const char* witness_status_name(WitnessStatus s);

struct WitnessCertificate {
    std::string digest;
    WitnessStatus status = WitnessStatus::Failed;
    std::string message;
    std::optional<MutationType> classification;
    FinDimCert jacobian;
    std::optional<std::vector<int>> core; // 0-based
    std::string core_type;
    std::optional<ProbeReport> core_probe;
    std::optional<StableFamily> family;
    std::optional<LiftResult> lifted;
    std::vector<std::string> caveats;
    WitnessOptions options;
};

/// FNV-1a over a canonical text rendering of the QP.
std::string qp_digest(const QuiverWithPotential& p);

WitnessCertificate run_witness(const QuiverWithPotential& p, const WitnessOptions& options = {});

} // namespace qpw
