#include "qpw/witness.hpp"

#include "qpw/error.hpp"
#include "qpw/linalg.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace qpw {

namespace {

void report(const WitnessOptions& o, const std::string& msg) {
    if (o.progress) o.progress(msg);
}

Matrix<Rational> scalar(const Rational& x) {
    Matrix<Rational> m(1, 1);
    m(0, 0) = x;
    return m;
}

void require_distinct_nonzero(const std::vector<Rational>& params) {
    if (params.size() < 2) fail(ErrorCode::InvalidArgument, "a family needs at least two parameter values");
    std::set<Rational> seen;
    for (const auto& x : params) {
        if (sgn(x) == 0) fail(ErrorCode::InvalidArgument, "parameter value 0 gives a decomposable module");
        if (!seen.insert(x).second) fail(ErrorCode::InvalidArgument, "parameter values must be distinct");
    }
}

std::vector<Rational> default_parameters(int k) {
    if (k < 2) fail(ErrorCode::InvalidArgument, "k must be at least 2");
    std::vector<Rational> out;
    for (int i = 1; i <= k; ++i) out.emplace_back(i);
    return out;
}

// Stability and brick checks on the core, plus pairwise Hom vanishing.
void verify_family(const StableFamily& f) {
    for (const auto& inst : f.instances) {
        if (!is_stable(f.core, inst.rep, f.theta))
            fail(ErrorCode::VerificationFailed, "family instance " + to_string(inst.parameter) + " is not stable");
        if (!is_brick(f.core, inst.rep))
            fail(ErrorCode::VerificationFailed, "family instance " + to_string(inst.parameter) + " is not a brick");
    }
    for (std::size_t i = 0; i < f.instances.size(); ++i)
        for (std::size_t j = 0; j < f.instances.size(); ++j)
            if (i != j && hom_space(f.core, f.instances[i].rep, f.instances[j].rep).dim != 0)
                fail(ErrorCode::VerificationFailed, "family instances are not pairwise Hom-orthogonal");
}

bool is_cycle_graph(const Quiver& q) {
    const int n = q.size();
    if (n < 2 || static_cast<int>(q.arrows().size()) != n || !is_connected(q)) return false;
    std::vector<int> deg(n, 0);
    for (const auto& a : q.arrows()) ++deg[a.src], ++deg[a.tgt];
    return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; });
}

std::string canonical_text(const QuiverWithPotential& p) {
    std::ostringstream os;
    const Quiver& q = p.quiver;
    os << "n=" << q.size() << ";arrows=";
    for (const auto& a : q.arrows()) os << a.id << ':' << a.src << '>' << a.tgt << ',';
    os << ";W=";
    for (const auto& [w, c] : p.potential.terms()) {
        os << to_string(c) << '*';
        for (const auto& id : w) os << id << '.';
        os << '|';
    }
    os << ";N=" << p.potential.truncation();
    return os.str();
}

bool max_rank_everywhere(const Quiver& q, const Representation& m) {
    for (const auto& a : q.arrows()) {
        const auto& mat = m.mats.at(a.id);
        if (rank(mat) != std::min(mat.rows(), mat.cols())) return false;
    }
    return true;
}

// Random search for generic-stratum stable classes; stops after k classes or
// a run of samples without a new one.
std::vector<Representation> sample_stable_classes(const QuiverWithPotential& p, const DimVector& d,
                                                  const Theta& theta, Field f, int k, std::uint64_t seed) {
    constexpr int kStaleLimit = 2000;
    const Quiver& q = p.quiver;
    const TruncatedAlgebra algebra = truncated_quotient(p, p.potential.truncation());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> digit(0, field_characteristic(f) - 1);
    std::vector<Representation> classes;
    for (int stale = 0; stale < kStaleLimit && int(classes.size()) < k; ++stale) {
        Representation m{f, d, {}};
        for (const auto& a : q.arrows()) {
            Matrix<Rational> mat(d[a.tgt], d[a.src]);
            for (int r = 0; r < mat.rows(); ++r)
                for (int c = 0; c < mat.cols(); ++c) mat(r, c) = digit(rng);
            m.mats[a.id] = std::move(mat);
        }
        if (!max_rank_everywhere(q, m) || !check_module(algebra, m) || !is_stable(q, m, theta)) continue;
        if (std::any_of(classes.begin(), classes.end(),
                        [&](const Representation& c) { return hom_space(q, m, c).dim != 0; }))
            continue;
        if (!is_brick(q, m)) continue;
        classes.push_back(std::move(m));
        stale = 0;
    }
    return classes;
}

} // namespace

const char* family_kind_name(FamilyKind k) {
    return k == FamilyKind::ExactFamily ? "exactFamily" : "evidenceEnumeration";
}

const char* witness_status_name(WitnessStatus s) {
    switch (s) {
    case WitnessStatus::Witness: return "witness";
    case WitnessStatus::DynkinNoWitness: return "dynkinNoWitness";
    case WitnessStatus::Refused: return "refused";
    case WitnessStatus::Failed: return "failed";
    }
    return "?";
}

ExchangeMatrix underlying_graph(const Quiver& q) {
    ExchangeMatrix a(q.size());
    for (const auto& ar : q.arrows()) {
        ++a(ar.src, ar.tgt);
        ++a(ar.tgt, ar.src);
    }
    return a;
}

DimVector null_root(const ExchangeMatrix& diagram) {
    const int n = diagram.size();
    Matrix<Rational> c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = (i == j ? 2 : 0) - diagram(i, j);
    Matrix<Rational> k = nullspace(c);
    if (k.cols() != 1) fail(ErrorCode::Domain, "diagram has no one-dimensional radical");
    mpz_class den = 1, g = 0;
    for (int i = 0; i < n; ++i) den = lcm(den, mpz_class(k(i, 0).get_den()));
    std::vector<mpz_class> v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = mpz_class(k(i, 0) * den);
        g = gcd(g, v[i]);
    }
    const int sign = sgn(v[0]) < 0 ? -1 : 1;
    DimVector out(n);
    for (int i = 0; i < n; ++i) {
        mpz_class x = v[i] / g * sign;
        if (sgn(x) <= 0) fail(ErrorCode::Domain, "radical generator is not positive");
        out[i] = static_cast<int>(x.get_si());
    }
    return out;
}

DimVector null_root(const DiagramType& affine) {
    if (affine.kind != MutationTag::Affine) fail(ErrorCode::Domain, "null root needs an affine diagram");
    return null_root(catalog_diagram(affine));
}

Theta defect_theta(const Quiver& q, const DimVector& delta) {
    if (static_cast<int>(delta.size()) != q.size()) fail(ErrorCode::InvalidArgument, "dimension vector size mismatch");
    Theta t(delta.begin(), delta.end());
    for (const auto& a : q.arrows()) t[a.tgt] -= delta[a.src];
    return t;
}

StableFamily build_family_kronecker(const Quiver& core, const std::vector<Rational>& parameters) {
    if (core.size() != 2) fail(ErrorCode::Domain, "Kronecker family needs a two-vertex quiver");
    int s = 0, t = 1;
    if (core.arrows_from_to(0, 1).empty()) std::swap(s, t);
    const auto arrows = core.arrows_from_to(s, t);
    if (arrows.size() < 2 || arrows.size() != core.arrows().size())
        fail(ErrorCode::Domain, "Kronecker family needs m >= 2 parallel arrows in one direction");
    require_distinct_nonzero(parameters);

    StableFamily f;
    f.core = core;
    f.d = {1, 1};
    f.theta = Theta(2, 0);
    f.theta[s] = 1;
    f.theta[t] = -1;
    f.parameter_slots = core.arrows()[arrows[1]].id;
    for (const auto& lambda : parameters) {
        Representation r{Field::Q, {1, 1}, {}};
        for (std::size_t i = 0; i < arrows.size(); ++i)
            r.mats[core.arrows()[arrows[i]].id] = scalar(i == 0 ? Rational(1) : i == 1 ? lambda : Rational(0));
        f.instances.push_back({lambda, normalized(core, std::move(r))});
    }
    verify_family(f);
    return f;
}

StableFamily build_family_kronecker(const Quiver& core, int k) {
    return build_family_kronecker(core, default_parameters(k));
}

StableFamily build_family_kronecker(int m, int k) {
    if (m < 2) fail(ErrorCode::InvalidArgument, "m must be at least 2");
    ExchangeMatrix b(2);
    b(0, 1) = m;
    b(1, 0) = -m;
    return build_family_kronecker(build_quiver(b), k);
}

StableFamily build_family_affine_A(const Quiver& core, const std::vector<Rational>& parameters) {
    if (core.size() == 2) return build_family_kronecker(core, parameters);
    if (!is_cycle_graph(core)) fail(ErrorCode::Domain, "affine A family needs a quiver whose underlying graph is a cycle");
    if (!is_acyclic(core)) fail(ErrorCode::Domain, "affine A family needs a cycle that is not cyclically oriented");
    require_distinct_nonzero(parameters);

    const int n = core.size();
    StableFamily f;
    f.core = core;
    f.d = DimVector(n, 1);
    f.parameter_slots = core.arrows().front().id;
    for (const auto& lambda : parameters) {
        Representation r{Field::Q, f.d, {}};
        for (std::size_t i = 0; i < core.arrows().size(); ++i)
            r.mats[core.arrows()[i].id] = scalar(i == 0 ? lambda : Rational(1));
        f.instances.push_back({lambda, normalized(core, std::move(r))});
    }
    // Every arrow acts nonzero, so the closed subsets do not depend on lambda.
    std::vector<DimVector> forbidden;
    for (const auto& e : submodule_dim_vectors(core, f.instances.front().rep)) {
        if (e != f.d && std::any_of(e.begin(), e.end(), [](int x) { return x != 0; })) forbidden.push_back(e);
    }
    f.theta = synthesize_theta(f.d, forbidden);
    verify_family(f);
    return f;
}

StableFamily build_family_affine_A(const Quiver& core, int k) {
    return build_family_affine_A(core, default_parameters(k));
}

Theta synthesize_theta(const DimVector& d, const std::vector<DimVector>& forbidden, std::optional<int> bound) {
    const int n = static_cast<int>(d.size());
    const int b = bound.value_or(kDefaultThetaBoundFactor * n);
    for (const auto& e : forbidden) {
        if (static_cast<int>(e.size()) != n) fail(ErrorCode::InvalidArgument, "dimension vector size mismatch");
        if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; }) || e == d)
            fail(ErrorCode::Infeasible, "forbidden set contains 0 or d itself");
    }
    const std::size_t m = forbidden.size();
    // Suffix sums bound what the unassigned coordinates can still contribute.
    std::vector<int> rest_d(n + 1, 0);
    std::vector<std::vector<int>> rest_e(m, std::vector<int>(n + 1, 0));
    for (int i = n - 1; i >= 0; --i) {
        rest_d[i] = rest_d[i + 1] + std::abs(d[i]);
        for (std::size_t j = 0; j < m; ++j) rest_e[j][i] = rest_e[j][i + 1] + std::abs(forbidden[j][i]);
    }

    Theta theta(n, 0);
    for (int r = 0; r <= b; ++r) {
        long sd = 0;
        std::vector<long> se(m, 0);
        bool hit_norm = false;
        bool found = false;
        auto rec = [&](auto&& self, int i) -> void {
            if (found) return;
            if (std::labs(sd) > long(r) * rest_d[i]) return;
            for (std::size_t j = 0; j < m; ++j)
                if (se[j] - long(r) * rest_e[j][i] > -1) return;
            if (i == n) {
                if (hit_norm) found = true;
                return;
            }
            for (int v = -r; v <= r && !found; ++v) {
                theta[i] = v;
                sd += long(v) * d[i];
                for (std::size_t j = 0; j < m; ++j) se[j] += long(v) * forbidden[j][i];
                const bool prev = hit_norm;
                hit_norm = hit_norm || std::abs(v) == r;
                self(self, i + 1);
                hit_norm = prev;
                if (found) return;
                sd -= long(v) * d[i];
                for (std::size_t j = 0; j < m; ++j) se[j] -= long(v) * forbidden[j][i];
            }
        };
        rec(rec, 0);
        if (found) return theta;
    }
    fail(ErrorCode::Infeasible, "no integer theta with max-norm <= " + std::to_string(b));
}

LiftResult lift(const StableFamily& family, const std::vector<int>& subset, const QuiverWithPotential& target) {
    const Quiver& q = target.quiver;
    if (subset.size() != family.d.size()) fail(ErrorCode::InvalidArgument, "subset size does not match the family");
    for (int v : subset)
        if (v < 0 || v >= q.size()) fail(ErrorCode::OutOfRange, "subset vertex out of range");

    LiftResult out;
    out.theta = Theta(q.size(), 0);
    for (std::size_t i = 0; i < subset.size(); ++i) out.theta[subset[i]] = family.theta[i];

    const TruncatedAlgebra algebra = truncated_quotient(target, target.potential.truncation());
    for (const auto& inst : family.instances) {
        Representation r{inst.rep.field, DimVector(q.size(), 0), {}};
        for (std::size_t i = 0; i < subset.size(); ++i) r.dims[subset[i]] = inst.rep.dims[i];
        for (const auto& [id, mat] : inst.rep.mats) {
            if (!q.arrow_index(id)) fail(ErrorCode::InvalidArgument, "family arrow " + id + " is not in the target quiver");
            r.mats[id] = mat;
        }
        LiftedInstance li;
        li.parameter = inst.parameter;
        li.rep = normalized(q, std::move(r));
        li.module_ok = check_module(algebra, li.rep);
        li.stable = is_stable(q, li.rep, out.theta);
        li.brick = is_brick(q, li.rep);
        const std::string tag = "lifted instance " + to_string(li.parameter);
        if (!li.module_ok) fail(ErrorCode::VerificationFailed, tag + " violates the Jacobian relations");
        if (!li.stable) fail(ErrorCode::VerificationFailed, tag + " is not stable for the lifted theta");
        if (!li.brick) fail(ErrorCode::VerificationFailed, tag + " is not a brick");
        out.instances.push_back(std::move(li));
    }
    for (std::size_t i = 0; i < out.instances.size(); ++i)
        for (std::size_t j = 0; j < out.instances.size(); ++j)
            if (i != j && hom_space(q, out.instances[i].rep, out.instances[j].rep).dim != 0)
                fail(ErrorCode::VerificationFailed, "lifted instances are not pairwise Hom-orthogonal");
    out.pairwise_hom_zero = true;
    return out;
}

EvidenceReport evidence_enumeration(const QuiverWithPotential& p, const DimVector& d, const Theta& theta,
                                    const std::vector<Field>& fields) {
    const Quiver& q = p.quiver;
    if (static_cast<int>(d.size()) != q.size() || static_cast<int>(theta.size()) != q.size())
        fail(ErrorCode::InvalidArgument, "dimension vector or theta size mismatch");
    if (pairing(theta, d) != 0) fail(ErrorCode::InvalidArgument, "theta must pair to zero with d");
    const TruncatedAlgebra algebra = truncated_quotient(p, p.potential.truncation());

    struct Slot {
        std::string id;
        int rows, cols;
    };
    std::vector<Slot> slots;
    std::size_t entries = 0;
    for (const auto& a : q.arrows()) {
        slots.push_back({a.id, d[a.tgt], d[a.src]});
        entries += std::size_t(d[a.tgt]) * std::size_t(d[a.src]);
    }

    EvidenceReport rep;
    rep.d = d;
    rep.theta = theta;
    for (Field f : fields) {
        FieldCount fc;
        fc.field = f;
        const int prime = field_characteristic(f);
        if (prime == 0) fail(ErrorCode::Domain, "evidence enumeration needs a prime field");
        std::size_t total = 1;
        for (std::size_t i = 0; i < entries && !fc.skipped; ++i) {
            total *= std::size_t(prime);
            if (total > kMaxEnumeratedReps) fc.skipped = true;
        }
        std::vector<Representation> classes, generic;
        if (!fc.skipped) {
            std::vector<int> digits(entries, 0);
            for (std::size_t count = 0; count < total; ++count) {
                std::size_t x = count;
                for (auto& g : digits) {
                    g = int(x % std::size_t(prime));
                    x /= std::size_t(prime);
                }
                Representation m{f, d, {}};
                std::size_t pos = 0;
                for (const auto& s : slots) {
                    Matrix<Rational> mat(s.rows, s.cols);
                    for (int r = 0; r < s.rows; ++r)
                        for (int c = 0; c < s.cols; ++c) mat(r, c) = digits[pos++];
                    m.mats[s.id] = std::move(mat);
                }
                ++fc.examined;
                if (!check_module(algebra, m) || !is_stable(q, m, theta)) continue;
                // Stable modules of one dimension vector are isomorphic iff Hom is nonzero.
                bool known = std::any_of(classes.begin(), classes.end(),
                                         [&](const Representation& c) { return hom_space(q, m, c).dim != 0; });
                if (known) continue;
                if (!is_brick(q, m)) continue;
                classes.push_back(m);
                if (max_rank_everywhere(q, m)) generic.push_back(m);
            }
        }
        fc.all_classes = static_cast<int>(classes.size());
        fc.classes = static_cast<int>(generic.size());
        rep.counts.push_back(fc);
        rep.representatives.push_back(std::move(generic));
    }
    return rep;
}

std::string qp_digest(const QuiverWithPotential& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text(p)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

WitnessCertificate run_witness(const QuiverWithPotential& p, const WitnessOptions& options) {
    if (options.k < 2) fail(ErrorCode::InvalidArgument, "k must be at least 2");
    WitnessCertificate cert;
    cert.options = options;
    cert.options.progress = nullptr;
    cert.digest = qp_digest(p);

    if (!p.is_reduced()) {
        cert.status = WitnessStatus::Refused;
        cert.message = "potential has terms of length <= 2; reduce it first";
        return cert;
    }

    report(options, "classifying mutation type");
    try {
        cert.classification = classify(p.quiver);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
        cert.status = WitnessStatus::Failed;
        cert.message = std::string("classification did not finish: ") + e.what();
        return cert;
    }

    report(options, "computing the truncated Jacobian algebra");
    try {
        cert.jacobian = truncated_quotient(p, p.potential.truncation()).certificate();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SizeGuard) throw;
        cert.jacobian.truncation = p.potential.truncation();
        if (cert.classification->tag != MutationTag::Dynkin) {
            cert.status = WitnessStatus::Refused;
            cert.message = std::string("Jacobian algebra too large to certify: ") + e.what();
            return cert;
        }
    }

    if (cert.classification->tag == MutationTag::Dynkin) {
        cert.status = WitnessStatus::DynkinNoWitness;
        cert.message = "\xCF\x84-tilting finite, no witness expected";
        return cert;
    }
    if (!cert.jacobian.finite()) {
        cert.status = WitnessStatus::Refused;
        cert.message = "Jacobian algebra is " + cert.jacobian.name() + "; finite dimension is required";
        return cert;
    }

    report(options, "searching for a non-Dynkin core");
    const auto first = find_non_dynkin_core(p.quiver);
    std::optional<std::vector<int>> chosen;
    visit_non_dynkin_cores(p.quiver, [&](const std::vector<int>& c) {
        if (is_acyclic(full_subquiver(p.quiver, c))) {
            chosen = c;
            return true;
        }
        return false;
    });
    if (!chosen) {
        cert.status = WitnessStatus::Failed;
        cert.message = "no acyclic affine or Kronecker core found";
        if (first) cert.core = first;
        return cert;
    }
    if (first && *first != *chosen)
        cert.caveats.push_back("smallest core is not acyclic; used the first acyclic core instead");
    cert.core = chosen;

    const QuiverWithPotential restricted = restrict_to(p, *chosen);
    const Quiver& core = restricted.quiver;
    cert.core_probe = nondegeneracy_probe(restricted, options.probe_depth, options.probe_trials, options.seed);
    cert.caveats.push_back(std::string("non-degeneracy of the core restriction is probed, not proved (probe ") +
                           (cert.core_probe->pass ? "passed" : "failed") + ")");
    cert.caveats.push_back("Jacobian finiteness certified at truncation " + std::to_string(cert.jacobian.truncation));

    report(options, "building the stable family");
    try {
        if (core.size() == 2) {
            cert.core_type = "K_" + std::to_string(core.arrows().size());
            cert.family = build_family_kronecker(core, options.k);
        } else {
            const auto type = match_catalog(core.b());
            if (!type || type->kind != MutationTag::Affine) fail(ErrorCode::Internal, "core is not affine");
            cert.core_type = type->name();
            if (type->series == 'A') {
                cert.family = build_family_affine_A(core, options.k);
            } else {
                StableFamily f;
                f.core = core;
                f.kind = FamilyKind::EvidenceEnumeration;
                f.d = null_root(underlying_graph(core));
                f.theta = defect_theta(core, f.d);
                f.evidence = evidence_enumeration(restricted, f.d, f.theta, options.evidence_fields);
                // Instances come from the field with the most generic classes;
                // fields too large to enumerate are sampled instead.
                std::vector<Representation> best;
                for (std::size_t i = 0; i < f.evidence->counts.size(); ++i) {
                    const auto& fc = f.evidence->counts[i];
                    std::vector<Representation> reps =
                        fc.skipped ? sample_stable_classes(restricted, f.d, f.theta, fc.field, options.k, options.seed)
                                   : f.evidence->representatives[i];
                    if (reps.size() > best.size()) best = std::move(reps);
                }
                for (std::size_t j = 0; j < best.size() && int(j) < options.k; ++j)
                    f.instances.push_back({Rational(int(j) + 1), best[j]});
                if (f.instances.size() < 2) fail(ErrorCode::VerificationFailed, "enumeration found fewer than two classes");
                if (int(f.instances.size()) < options.k)
                    cert.caveats.push_back("only " + std::to_string(f.instances.size()) + " classes over " +
                                           field_name(f.instances.front().rep.field) + "; fewer than k");
                cert.caveats.push_back("family is backed by finite-field class counts, not an explicit parameterization");
                cert.family = std::move(f);
            }
        }
        report(options, "lifting and re-verifying");
        cert.lifted = lift(*cert.family, *chosen, p);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::VerificationFailed && e.code() != ErrorCode::Infeasible &&
            e.code() != ErrorCode::SizeGuard)
            throw;
        cert.status = WitnessStatus::Failed;
        cert.message = e.what();
        return cert;
    }
    cert.status = WitnessStatus::Witness;
    cert.message = std::to_string(cert.lifted->instances.size()) +
                   " pairwise non-isomorphic stable bricks of one dimension vector";
    return cert;
}

} // namespace qpw
