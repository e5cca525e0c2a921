#pragma once

#include <json.hpp>

#include <string>
#include <variant>

#include "fincon/convergence.hpp"
#include "fincon/graph.hpp"
#include "fincon/msform.hpp"
#include "fincon/sos.hpp"
#include "fincon/stability.hpp"

namespace fincon {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Rounded to 12 significant digits; NaN and infinities become null.
Json json_number(double v);
// Integers as JSON numbers, everything else as a "p/q" string.
Json json_rational(const Rational& v);
// Accepts numbers (exactly converted) and strings accepted by parse_rational.
Rational rational_from_json(const Json& j);

Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

Json to_json(Edge e);
Json to_json(const VertexSet& s);

Json to_json(const CriticalReport& r);
Json to_json(const TwinContraction& c);
Json to_json(const OracleAlphaRun& r);

// {"graph": ..., "edge_values": [[i, j, v], ...]}; edges missing from
// edge_values take value 1.
Json to_json(const QuadForm& q);
QuadForm quadform_from_json(const Json& j);

Json to_json(const MinimizerCheck& c);
Json to_json(const KktReport& r);
Json to_json(const Verdict& v);

// Certificates carry "exact": true when coefficients are rationals.
Json to_json(const RationalCertificate& c);
Json to_json(const RealCertificate& c);
std::variant<RationalCertificate, RealCertificate> certificate_from_json(const Json& j);

Json to_json(const CertificateReport& r);
Json to_json(const sdp::CheckReport& r);
Json to_json(const HierarchyResult& r, bool include_certificate = false);
Json to_json(const FeasibilityBound& b);
Json to_json(const LpLevelOne& r);

// A point is either an array or {"x": [...]}. All-string or all-integer
// entries give an exact point; otherwise a floating one.
std::variant<SimplexPoint<Rational>, SimplexPoint<double>> point_from_json(const Json& j);

}  // namespace fincon
