#include "stcalc/serialize.hpp"

namespace stcalc {

namespace {

std::string_view kind_name(ConvergenceKind k) {
    switch (k) {
        case ConvergenceKind::Entire: return "entire";
        case ConvergenceKind::Disk: return "disk";
        case ConvergenceKind::PointOnly: return "point";
    }
    return "?";
}

template <Scalar T>
Json egf_json(const TruncatedEgf<T>& f) {
    Json j;
    j["s"] = to_json_value(f.params().s());
    j["t"] = to_json_value(f.params().t());
    j["exact"] = is_exact_v<T>;
    j["order"] = f.order();
    Json c = Json::array();
    for (const T& v : f.coeffs()) c.push_back(to_json_value(v));
    j["coefficients"] = std::move(c);
    return j;
}

}  // namespace

Json to_json(const ConvergenceClass& c) {
    Json j;
    j["kind"] = kind_name(c.kind);
    j["radius"] = c.radius ? Json(*c.radius) : Json(nullptr);
    return j;
}

Json to_json(const Region& r) {
    Json j;
    j["label"] = label_name(r.label);
    j["domain"] = r.domain ? to_json(*r.domain) : Json(nullptr);
    j["branch"] = r.branch;
    return j;
}

Json to_json(const TruncatedEgf<double>& f) { return egf_json(f); }
Json to_json(const TruncatedEgf<Rational>& f) { return egf_json(f); }

Json to_json(const SolveReport& r) {
    Json j;
    if (r.exact_series) {
        j["series"] = to_json(*r.exact_series);
    } else if (r.series) {
        j["series"] = to_json(*r.series);
    } else {
        j["series"] = nullptr;
    }
    Json lattice = Json::array();
    for (const LatticePoint& pt : r.lattice) lattice.push_back({{"x", pt.x}, {"y", pt.y}, {"residual", pt.residual}});
    j["lattice"] = std::move(lattice);
    j["residual"] = r.max_residual;
    j["bound"] = r.error_bound ? Json(*r.error_bound) : Json(nullptr);
    j["region"] = r.region ? to_json(*r.region) : Json(nullptr);
    j["differences"] = r.differences;
    j["interval"] = r.interval;
    j["binding"] = r.binding;
    return j;
}

Json to_json(const Error& e) {
    Json j;
    j["schema"] = kSchema;
    j["error"] = std::string(e.name());
    j["module"] = e.module();
    j["message"] = e.what();
    if (const auto* se = dynamic_cast<const SyntaxError*>(&e)) {
        j["position"] = se->position();
        j["expected"] = se->expected();
    }
    return j;
}

}  // namespace stcalc
