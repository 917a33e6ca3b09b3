#pragma once

#include <json.hpp>

#include "stcalc/solvers.hpp"

namespace stcalc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "stcalc/1";

/// Exact values become "p/q" strings so no precision is lost.
inline Json to_json_value(double v) { return v; }
inline Json to_json_value(const Rational& v) { return to_string(v); }

Json to_json(const ConvergenceClass& c);
Json to_json(const Region& r);
Json to_json(const TruncatedEgf<double>& f);
Json to_json(const TruncatedEgf<Rational>& f);
Json to_json(const SolveReport& r);
Json to_json(const Error& e);

}  // namespace stcalc
