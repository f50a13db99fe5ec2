#include "qpw/json_io.hpp"

#include "qpw/error.hpp"

#include <sstream>

namespace qpw::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { fail(ErrorCode::InvalidArgument, what); }

const json& require(const json& j, const char* key) {
    if (!j.is_object()) malformed("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) malformed(std::string("missing field \"") + key + "\"");
    return *it;
}

int as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) malformed(std::string(what) + " must be an integer");
    return j.get<int>();
}

json ints(const std::vector<int>& v) { return json(v); }

json one_based(const std::vector<int>& v) {
    json out = json::array();
    for (int x : v) out.push_back(x + 1);
    return out;
}

// Turns nlohmann type errors into our InvalidArgument.
template <class Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        malformed(std::string("malformed document: ") + e.what());
    }
}

json matrix_to_json(const Matrix<Rational>& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(rational_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json fin_dim_to_json(const FinDimCert& c) {
    json j;
    j["status"] = c.name();
    if (c.finite()) j["dim"] = c.total_dim;
    j["truncation"] = c.truncation;
    if (c.vanishing_degree) j["vanishingDegree"] = *c.vanishing_degree;
    return j;
}

} // namespace

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json rational_to_json(const Rational& q) {
    if (is_integral(q) && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    return json(to_string(q));
}

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    malformed("expected an integer or a \"p/q\" string");
}

json quiver_to_json(const Quiver& q) {
    json j;
    j["n"] = q.size();
    j["b"] = q.b().rows();
    json arrows = json::array();
    for (const auto& a : q.arrows()) arrows.push_back({{"id", a.id}, {"src", a.src + 1}, {"tgt", a.tgt + 1}});
    j["arrows"] = std::move(arrows);
    j["labels"] = q.labels();
    return j;
}

Quiver quiver_from_json(const json& j) {
    return guarded([&] {
        const int n = as_int(require(j, "n"), "\"n\"");
        if (n < 1) malformed("\"n\" must be positive");
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        std::optional<ExchangeMatrix> b;
        if (j.contains("b")) {
            b = ExchangeMatrix::from_rows(j.at("b").get<std::vector<std::vector<int>>>());
            if (b->size() != n) malformed("\"b\" must be n x n");
        }
        if (!j.contains("arrows")) {
            if (!b) malformed("a quiver needs \"b\" or \"arrows\"");
            return build_quiver(*b, labels);
        }
        std::vector<Arrow> arrows;
        for (const auto& a : j.at("arrows")) {
            Arrow ar;
            if (a.contains("id")) ar.id = a.at("id").get<std::string>();
            ar.src = as_int(require(a, "src"), "arrow src") - 1;
            ar.tgt = as_int(require(a, "tgt"), "arrow tgt") - 1;
            if (ar.src < 0 || ar.src >= n || ar.tgt < 0 || ar.tgt >= n)
                fail(ErrorCode::OutOfRange, "arrow endpoint out of range");
            arrows.push_back(std::move(ar));
        }
        Quiver q = build_quiver(n, std::move(arrows), labels);
        if (b && !(q.b() == *b)) malformed("\"b\" disagrees with \"arrows\"");
        return q;
    });
}

json qp_to_json(const QuiverWithPotential& p) {
    json j = quiver_to_json(p.quiver);
    json terms = json::array();
    for (const auto& [w, c] : p.potential.terms()) terms.push_back({{"coef", to_string(c)}, {"cycle", w}});
    j["potential"] = std::move(terms);
    j["truncation"] = p.potential.truncation();
    return j;
}

QuiverWithPotential qp_from_json(const json& j) {
    return guarded([&] {
        QuiverWithPotential p;
        p.quiver = quiver_from_json(j);
        int n = kDefaultTruncation;
        if (j.contains("truncation")) n = as_int(j.at("truncation"), "\"truncation\"");
        if (n < 1) malformed("\"truncation\" must be positive");
        p.potential = Potential(n);
        if (j.contains("potential")) {
            for (const auto& t : j.at("potential")) {
                const Rational c = rational_from_json(require(t, "coef"));
                const Word w = require(t, "cycle").get<Word>();
                if (w.empty()) malformed("potential cycle must be nonempty");
                p.potential.add_cycle(p.quiver, w, c);
            }
        }
        return p;
    });
}

json rep_to_json(const Representation& m) {
    json j;
    j["field"] = field_name(m.field);
    j["dims"] = ints(m.dims);
    json mats = json::object();
    for (const auto& [id, mat] : m.mats) mats[id] = matrix_to_json(mat);
    j["mats"] = std::move(mats);
    return j;
}

Representation rep_from_json(const json& j) {
    return guarded([&] {
        Representation m;
        m.field = parse_field(require(j, "field").get<std::string>());
        m.dims = require(j, "dims").get<std::vector<int>>();
        if (j.contains("mats")) {
            for (const auto& [id, rows] : j.at("mats").items()) {
                if (!rows.is_array()) malformed("matrix for " + id + " must be an array of rows");
                const int r = static_cast<int>(rows.size());
                const int c = r == 0 ? 0 : static_cast<int>(rows.at(0).size());
                Matrix<Rational> mat(r, c);
                for (int i = 0; i < r; ++i) {
                    if (!rows.at(i).is_array() || static_cast<int>(rows.at(i).size()) != c)
                        malformed("matrix for " + id + " is ragged");
                    for (int k = 0; k < c; ++k) mat(i, k) = rational_from_json(rows.at(i).at(k));
                }
                m.mats[id] = std::move(mat);
            }
        }
        return m;
    });
}

json classification_to_json(const MutationType& t) {
    json j;
    j["type"] = t.name();
    j["witnessSequence"] = one_based(t.witness_sequence);
    j["visited"] = t.visited;
    return j;
}

json jacobian_to_json(const TruncatedAlgebra& a) {
    json j;
    j["gradedDims"] = a.graded_dims();
    j["status"] = a.certificate().name();
    if (a.certificate().finite()) j["dim"] = a.certificate().total_dim;
    j["truncation"] = a.truncation();
    return j;
}

StabilityReport stability_report(const QuiverWithPotential& p, const Representation& raw, const Theta& theta) {
    const Quiver& q = p.quiver;
    if (static_cast<int>(theta.size()) != q.size()) fail(ErrorCode::InvalidArgument, "theta has the wrong length");
    const Representation m = normalized(q, raw);
    StabilityReport r;
    r.pairing = pairing(theta, m.dims);
    r.module = check_module(truncated_quotient(p, p.potential.truncation()), m);
    if (!r.module) return r;
    r.semistable = is_semistable(q, m, theta);
    r.stable = is_stable(q, m, theta);
    r.simple_in_w_theta = is_simple_in_W_theta(q, m, theta);
    r.brick = is_brick(q, m);
    return r;
}

json stability_to_json(const StabilityReport& r, const Theta& theta) {
    json j;
    j["theta"] = ints(theta);
    j["pairing"] = r.pairing;
    j["module"] = r.module;
    j["semistable"] = r.semistable;
    j["stable"] = r.stable;
    j["simpleInWTheta"] = r.simple_in_w_theta;
    j["brick"] = r.brick;
    return j;
}

json probe_to_json(const RigidTameReport& r, const GVector& g) {
    json j;
    j["g"] = ints(g);
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["diagonalMin"] = r.diagonal_min;
    j["offDiagonalMin"] = r.off_diagonal_min;
    j["note"] = "attained upper bounds over sampled complexes";
    return j;
}

json evidence_to_json(const EvidenceReport& r) {
    json j;
    j["d"] = ints(r.d);
    j["theta"] = ints(r.theta);
    json counts = json::array();
    for (const auto& c : r.counts)
        counts.push_back({{"field", field_name(c.field)},
                          {"classes", c.classes},
                          {"allClasses", c.all_classes},
                          {"examined", c.examined},
                          {"skipped", c.skipped}});
    j["counts"] = std::move(counts);
    return j;
}

json family_to_json(const StableFamily& f) {
    json j;
    j["kind"] = family_kind_name(f.kind);
    j["coreQuiver"] = quiver_to_json(f.core);
    j["d"] = ints(f.d);
    j["thetaCore"] = ints(f.theta);
    j["parameterSlots"] = f.parameter_slots;
    json inst = json::array();
    for (const auto& i : f.instances)
        inst.push_back({{"parameter", rational_to_json(i.parameter)}, {"representation", rep_to_json(i.rep)}});
    j["instances"] = std::move(inst);
    if (f.evidence) j["evidence"] = evidence_to_json(*f.evidence);
    return j;
}

json certificate_to_json(const WitnessCertificate& c) {
    json j;
    j["tool"] = "qpw";
    j["version"] = kToolVersion;
    j["digest"] = c.digest;
    j["status"] = witness_status_name(c.status);
    j["message"] = c.message;
    j["classification"] = c.classification ? classification_to_json(*c.classification) : json(nullptr);
    j["jacobian"] = fin_dim_to_json(c.jacobian);
    j["core"] = c.core ? one_based(*c.core) : json(nullptr);
    j["coreType"] = c.core_type;
    if (c.core_probe) {
        j["coreProbe"] = {{"pass", c.core_probe->pass},
                          {"failingSequence", one_based(c.core_probe->failing_sequence)},
                          {"depth", c.core_probe->depth},
                          {"trials", c.core_probe->trials},
                          {"seed", c.core_probe->seed}};
    } else {
        j["coreProbe"] = nullptr;
    }
    j["family"] = c.family ? family_to_json(*c.family) : json(nullptr);
    if (c.lifted) {
        j["thetaLifted"] = ints(c.lifted->theta);
        json inst = json::array();
        for (const auto& li : c.lifted->instances)
            inst.push_back({{"parameter", rational_to_json(li.parameter)},
                            {"representation", rep_to_json(li.rep)},
                            {"moduleOk", li.module_ok},
                            {"stable", li.stable},
                            {"brick", li.brick}});
        j["liftedInstances"] = std::move(inst);
        j["pairwiseHomZero"] = c.lifted->pairwise_hom_zero;
    } else {
        j["thetaLifted"] = nullptr;
        j["liftedInstances"] = json::array();
        j["pairwiseHomZero"] = false;
    }
    j["caveats"] = c.caveats;
    json fields = json::array();
    for (Field f : c.options.evidence_fields) fields.push_back(field_name(f));
    j["options"] = {{"k", c.options.k},
                    {"probeDepth", c.options.probe_depth},
                    {"probeTrials", c.options.probe_trials},
                    {"seed", c.options.seed},
                    {"evidenceFields", std::move(fields)}};
    return j;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            malformed("malformed integer list '" + text + "'");
        }
    }
    if (out.empty()) malformed("empty integer list");
    return out;
}

} // namespace qpw::io
