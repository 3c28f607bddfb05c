#pragma once
//
// JSON encodings of keys, rationals, cochains and the verification reports.
//

#include <exception>
#include <map>
#include <string>

#include <json.hpp>

#include "btharm/arithmetic.hpp"
#include "btharm/harmonic.hpp"

namespace bt {

using Json = nlohmann::ordered_json;

/// "a/b" or "a".
std::string rational_string(const Rational& x);
/// Accepts "a", "a/b" or an integer.  Throws InvalidArgument.
Rational rational_from_json(const Json& j);

/// Inverse of key_string.  Throws InvalidArgument.
Key key_from_string(const std::string& s);

Json hc_report_json(const HcReport& r);
Json roundtrip_report_json(const RoundtripReport& r);
Json well_defined_json(const WellDefinedReport& r);
Json invariance_json(const InvarianceReport& r);
Json cusp_sum_json(const CuspSum& c);
Json census_json(const std::map<BundleType, int>& census);
Json cell_json(const PointedCell& c);

/// {"p", "e", "n", "k", "r", "values": {cell key: value}}; zero values are omitted.
Json cochain_json(const Cochain& h);
/// Rebuilds the window and the cochain.  Unknown keys raise OutOfWindow.
Cochain cochain_from_json(const Json& j, const Limits& lim = {});

/// {"error": kind, "message": what}.
Json error_json(const std::exception& e);

}  // namespace bt
