#pragma once

// JSON documents shared by the CLI, the C API and the HTTP service.
// Vertices are 1-based in every document.

#include "qpw/classify.hpp"
#include "qpw/einvariant.hpp"
#include "qpw/jacobian.hpp"
#include "qpw/representation.hpp"
#include "qpw/witness.hpp"

#include "json.hpp"

#include <string>

namespace qpw::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Parses text; malformed input throws InvalidArgument.
json parse(const std::string& text);
/// The one place documents are rendered (indented, newline-terminated), so
/// every front end agrees byte for byte.
std::string dump(const json& j);

json quiver_to_json(const Quiver& q);
/// Accepts "b", "arrows", or both (which must agree).
Quiver quiver_from_json(const json& j);

json qp_to_json(const QuiverWithPotential& p);
/// Missing "potential" means W = 0; missing "truncation" means the default.
QuiverWithPotential qp_from_json(const json& j);

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);

json rep_to_json(const Representation& m);
Representation rep_from_json(const json& j);

json classification_to_json(const MutationType& t);
json jacobian_to_json(const TruncatedAlgebra& a);

struct StabilityReport {
    bool module = false;
    bool semistable = false;
    bool stable = false;
    bool simple_in_w_theta = false;
    bool brick = false;
    int pairing = 0;
};
StabilityReport stability_report(const QuiverWithPotential& p, const Representation& m, const Theta& theta);
json stability_to_json(const StabilityReport& r, const Theta& theta);

json probe_to_json(const RigidTameReport& r, const GVector& g);
json evidence_to_json(const EvidenceReport& r);
json family_to_json(const StableFamily& f);
json certificate_to_json(const WitnessCertificate& c);

/// Comma separated integers, e.g. "1,-1".
std::vector<int> parse_int_list(const std::string& text);

} // namespace qpw::io
