#include "stcalc/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <sstream>

#include "stcalc/serialize.hpp"

namespace stcalc::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Literal literal(const std::string& text, const char* flag) {
    try {
        return parse_literal(text);
    } catch (const Error&) {
        throw UsageError(std::string("--") + flag + ": not a number: '" + text + "'");
    }
}

bool all_exact(std::initializer_list<Literal> lits) {
    for (const Literal& l : lits) {
        if (!l.exact) return false;
    }
    return true;
}

template <Scalar T>
T as(const Literal& l) {
    return from_rational<T>(l.value);
}

// Calls f with a double or Rational tag depending on `exact`.
template <class F>
Json dispatch(bool exact, F&& f) {
    if (exact) return f(Rational(0));
    return f(0.0);
}

Regime parse_regime(const std::string& r) {
    if (r == "S") return Regime::S;
    if (r == "T") return Regime::T;
    return Regime::Auto;
}

Json header(const char* command) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    return j;
}

Json domain_fields(Json j, const std::optional<ConvergenceClass>& d) {
    if (!d) {
        j["domain"] = nullptr;
        j["radius"] = nullptr;
        return j;
    }
    const Json dj = to_json(*d);
    j["domain"] = dj["kind"];
    j["radius"] = dj["radius"];
    return j;
}

std::string csv_cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

// First top-level array becomes the table; otherwise scalar fields become key,value rows.
void write_csv(const Json& doc, std::ostream& out) {
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_array() || value.empty()) continue;
        if (value.front().is_object()) {
            std::string sep;
            for (const auto& [col, unused] : value.front().items()) {
                out << sep << col;
                sep = ",";
            }
            out << "\n";
            for (const auto& row : value) {
                sep.clear();
                for (const auto& [col, cell] : row.items()) {
                    out << sep << csv_cell(cell);
                    sep = ",";
                }
                out << "\n";
            }
        } else {
            out << "n," << key << "\n";
            for (std::size_t i = 0; i < value.size(); ++i) out << i << "," << csv_cell(value[i]) << "\n";
        }
        return;
    }
    out << "key,value\n";
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_structured()) out << key << "," << csv_cell(value) << "\n";
    }
}

RealFn function_of_x(const std::string& text) {
    const Expr e = parse_expr(text);
    if (uses(e, Var::Y) || uses(e, Var::YU)) {
        throw Error(ErrorCode::DomainError, "cli", "--f may only use x");
    }
    return [e](double x) { return evaluate(e, x, 0.0, 0.0); };
}

struct SolveFlags {
    std::string s, t, u, rhs, y0 = "1", kind = "auto", regime = "auto";
    int N = 20;
    std::optional<int> iterations;
    double x_max = kDefaultXMax;
    double a_dom = kDefaultXMax;
    double b = 1.0;
    std::optional<double> L1, L2, M;
    bool lattice = false;
};

const std::array<unsigned, 3> kY{0, 1, 0};
const std::array<unsigned, 3> kYU{0, 0, 1};

std::string detect_kind(const Expr& rhs, const Literal& y0) {
    const auto poly = to_polynomial(rhs);
    bool linear_only = poly.has_value();
    if (poly) {
        for (const auto& [ex, c] : *poly) {
            if (ex != kY && ex != kYU) linear_only = false;
        }
    }
    if (linear_only && !poly->contains(kY)) return "linear";
    if (linear_only && y0.value == 1) return "two-term";
    if (!uses(rhs, Var::X) && !uses(rhs, Var::Y)) return "bell";
    return "iterate";
}

Json run_solve(const SolveFlags& f) {
    const Literal s = literal(f.s, "s"), t = literal(f.t, "t"), u = literal(f.u, "u"), y0 = literal(f.y0, "y0");
    const Expr rhs = parse_expr(f.rhs);
    const std::string kind = f.kind == "auto" ? detect_kind(rhs, y0) : f.kind;
    const auto poly = to_polynomial(rhs);
    const auto coeff = [&](const std::array<unsigned, 3>& ex) {
        if (!poly) return Rational(0);
        const auto it = poly->find(ex);
        return it == poly->end() ? Rational(0) : it->second;
    };
    if (kind == "linear" || kind == "two-term") {
        for (const auto& [ex, c] : poly ? *poly : Polynomial{}) {
            if (ex != kYU && (kind == "linear" || ex != kY)) {
                throw Error(ErrorCode::DomainError, "cli", "rhs is not of the form " +
                                                               std::string(kind == "linear" ? "a*yu" : "a*y + b*yu"));
            }
        }
        if (!poly) throw Error(ErrorCode::DomainError, "cli", "rhs is not polynomial");
        if (kind == "two-term" && y0.value != 1) {
            throw Error(ErrorCode::DomainError, "cli", "the two-term solver fixes y(0) = 1");
        }
    }
    const bool exact = all_exact({s, t, u, y0}) && all_literals_exact(rhs) && !f.lattice;
    Json j = header("solve");
    j["kind"] = kind;
    j["exact"] = exact;
    const Json report = dispatch(exact, [&](auto tag) -> Json {
        using T = decltype(tag);
        const StParams<T> p = make_params(as<T>(s), as<T>(t));
        const T uu = as<T>(u);
        const T yy = as<T>(y0);
        if (kind == "linear") {
            return to_json(solve_linear_pantograph<T>(p, from_rational<T>(coeff(kYU)), uu, yy, f.N, f.x_max));
        }
        if (kind == "two-term") {
            return to_json(two_term_pantograph<T>(p, from_rational<T>(coeff(kY)), from_rational<T>(coeff(kYU)), uu,
                                                  f.N, f.x_max));
        }
        if (kind == "bell") return to_json(bell_autonomous_solve<T>(p, rhs, uu, yy, f.N, f.x_max));
        if (kind == "iterate") {
            ApproximationOptions opts;
            opts.a_dom = f.a_dom;
            opts.b = f.b;
            opts.L1 = f.L1;
            opts.L2 = f.L2;
            opts.M = f.M;
            opts.regime = parse_regime(f.regime);
            opts.lattice_mode = f.lattice;
            return to_json(successive_approximation<T>(EquationSpec<T>{p, uu, rhs, yy}, f.iterations.value_or(f.N),
                                                       f.N, opts));
        }
        throw UsageError("--kind must be auto, linear, two-term, bell or iterate");
    });
    for (const auto& [key, value] : report.items()) j[key] = value;
    return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Calculator for (s,t)-Fibonacci calculus: sequences, derivatives, integrals, exponentials, solvers"};
    app.name("stcalc");
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::function<Json()> action;
    std::string s = "1", t = "1", u, fexpr, kind, mode, regime = "auto", xlist, v, xi = "1";
    std::optional<std::string> u_opt, k_a, k_b;
    int n = 0, k = 0, N = 20;
    std::optional<int> k_opt, K;
    std::optional<double> alpha;
    double x = 0, lo = 0, hi = 0, tol = 0, x_max = kDefaultXMax;

    const auto add_st = [&](CLI::App* sub) {
        sub->add_option("--s", s, "s (p/q for exact)")->required();
        sub->add_option("--t", t, "t (p/q for exact)")->required();
    };

    CLI::App* seq = app.add_subcommand("seq", "{0}..{n}, optionally deformed by u");
    add_st(seq);
    seq->add_option("--u", u_opt);
    seq->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
    seq->callback([&] {
        action = [&] {
            const Literal ls = literal(s, "s"), lt = literal(t, "t");
            const Literal lu = u_opt ? literal(*u_opt, "u") : Literal{Rational(1), true};
            Json j = header("seq");
            j["exact"] = all_exact({ls, lt, lu});
            j["values"] = dispatch(j["exact"].get<bool>(), [&](auto tag) -> Json {
                using T = decltype(tag);
                const T uu = as<T>(lu);
                Json vals = Json::array();
                for (const T& val : st_numbers<T>(uu * as<T>(ls), uu * uu * as<T>(lt), n)) {
                    vals.push_back(to_json_value(val));
                }
                return vals;
            });
            return j;
        };
    });

    CLI::App* fib = app.add_subcommand("fib", "fibotorial {n}! and fibonomial C(n,k)");
    add_st(fib);
    fib->add_option("--u", u_opt);
    fib->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
    fib->add_option("--k", k_opt);
    fib->callback([&] {
        action = [&] {
            const Literal ls = literal(s, "s"), lt = literal(t, "t");
            const Literal lu = u_opt ? literal(*u_opt, "u") : Literal{Rational(1), true};
            Json j = header("fib");
            j["exact"] = all_exact({ls, lt, lu});
            const Json vals = dispatch(j["exact"].get<bool>(), [&](auto tag) -> Json {
                using T = decltype(tag);
                const StParams<T> p = make_params(as<T>(ls), as<T>(lt));
                Json r;
                r["fibotorial"] = to_json_value(fibotorial(p, as<T>(lu), n));
                if (k_opt) r["fibonomial"] = to_json_value(fibonomial(p, as<T>(lu), n, *k_opt));
                return r;
            });
            for (const auto& [key, value] : vals.items()) j[key] = value;
            return j;
        };
    });

    CLI::App* diff = app.add_subcommand("diff", "(s,t)-derivative of f(x) at a point");
    add_st(diff);
    diff->add_option("--u", u_opt);
    diff->add_option("--f", fexpr, "expression in x")->required();
    diff->add_option("--x", x)->required();
    diff->callback([&] {
        action = [&] {
            const StParams<double> p = make_params(to_double(literal(s, "s").value), to_double(literal(t, "t").value));
            const double uu = u_opt ? to_double(literal(*u_opt, "u").value) : 1.0;
            Json j = header("diff");
            j["x"] = x;
            j["derivative"] = st_derivative(function_of_x(fexpr), p, uu, x);
            return j;
        };
    });

    CLI::App* integ = app.add_subcommand("integrate", "(s,t)-integral of f over [a,b]");
    add_st(integ);
    integ->add_option("--f", fexpr, "expression in x")->required();
    integ->add_option("--a", lo);
    integ->add_option("--b", hi)->required();
    integ->add_option("--tol", tol);
    integ->callback([&] {
        action = [&] {
            const StParams<double> p = make_params(to_double(literal(s, "s").value), to_double(literal(t, "t").value));
            Json j = header("integrate");
            j["a"] = lo;
            j["b"] = hi;
            j["integral"] = st_integral(function_of_x(fexpr), lo, hi, p, tol > 0 ? tol : kDefaultIntegralTol);
            return j;
        };
    });

    CLI::App* ex = app.add_subcommand("exp", "deformed exponential: series, product or both");
    add_st(ex);
    ex->add_option("--u", u_opt);
    ex->add_option("--z", x)->required();
    ex->add_option("--kind", kind, "deformed, exp or expprime")->check(CLI::IsMember({"deformed", "exp", "expprime"}));
    ex->add_option("--mode", mode, "series, product or compare")->check(CLI::IsMember({"series", "product", "compare"}));
    ex->add_option("--K", K);
    ex->add_option("--tol", tol);
    ex->callback([&] {
        action = [&] {
            const StParams<double> p = make_params(to_double(literal(s, "s").value), to_double(literal(t, "t").value));
            ExpKind ek = ExpKind::exp();
            if (kind == "expprime") {
                ek = ExpKind::exp_prime();
            } else if (kind.empty() || kind == "deformed") {
                if (!u_opt) throw UsageError("--u is required for the deformed exponential");
                ek = ExpKind::deformed(to_double(literal(*u_opt, "u").value));
            }
            const std::string m = mode.empty() ? "series" : mode;
            Json j = header("exp");
            j["u"] = ek.resolve(p);
            j["z"] = x;
            j = domain_fields(std::move(j), exp_domain(p, ek.resolve(p)));
            std::optional<double> series, product;
            if (m != "product") {
                const SeriesValue sv = exp_st(p, ek, x, tol > 0 ? tol : kDefaultSeriesTol);
                series = sv.value;
                j["series"] = sv.value;
                j["tail_bound"] = sv.tail_bound;
                j["terms"] = sv.terms;
            }
            if (m != "series") {
                product = exp_product(p, ek, x, K);
                j["product"] = *product;
            }
            if (series && product) j["difference"] = std::abs(*series - *product);
            return j;
        };
    });

    CLI::App* cls = app.add_subcommand("classify", "convergence class of the exponential or of E(a,b,u;z)");
    add_st(cls);
    cls->add_option("--u", u)->required();
    cls->add_option("--a", k_a);
    cls->add_option("--b", k_b);
    cls->add_option("--alpha", alpha, "coefficient growth rate for a general Ward series");
    cls->add_option("--regime", regime)->check(CLI::IsMember({"auto", "S", "T"}));
    cls->callback([&] {
        action = [&] {
            const Literal ls = literal(s, "s"), lt = literal(t, "t"), lu = literal(u, "u");
            Json j = header("classify");
            if (k_a || k_b) {
                const Literal la = literal(k_a.value_or("0"), "a"), lb = literal(k_b.value_or("0"), "b");
                const Region r = [&] {
                    if (all_exact({ls, lt, lu, la, lb})) {
                        return classify_E<Rational>(make_params(ls.value, lt.value), lu.value, la.value, lb.value,
                                                    parse_regime(regime));
                    }
                    return classify_E<double>(make_params(to_double(ls.value), to_double(lt.value)),
                                              to_double(lu.value), to_double(la.value), to_double(lb.value),
                                              parse_regime(regime));
                }();
                j["region"] = label_name(r.label);
                j = domain_fields(std::move(j), r.domain);
                j["branch"] = r.branch;
                return j;
            }
            const StParams<double> p = make_params(to_double(ls.value), to_double(lt.value));
            j["region"] = nullptr;
            if (alpha) return domain_fields(std::move(j), classify_series(p, to_double(lu.value), *alpha));
            return domain_fields(std::move(j), exp_domain(p, to_double(lu.value)));
        };
    });

    SolveFlags sf;
    CLI::App* solve = app.add_subcommand("solve", "D y = f(x, y, yu) with y(0) = y0");
    solve->add_option("--s", sf.s)->required();
    solve->add_option("--t", sf.t)->required();
    solve->add_option("--u", sf.u)->required();
    solve->add_option("--rhs", sf.rhs, "expression in x, y, yu")->required();
    solve->add_option("--y0", sf.y0);
    solve->add_option("--N", sf.N)->check(CLI::NonNegativeNumber);
    solve->add_option("--kind", sf.kind)->check(CLI::IsMember({"auto", "linear", "two-term", "bell", "iterate"}));
    solve->add_option("--iterations", sf.iterations);
    solve->add_option("--x-max", sf.x_max);
    solve->add_option("--a-dom", sf.a_dom);
    solve->add_option("--b", sf.b, "half-height of the rectangle around y0");
    solve->add_option("--L1", sf.L1);
    solve->add_option("--L2", sf.L2);
    solve->add_option("--M", sf.M);
    solve->add_option("--regime", sf.regime)->check(CLI::IsMember({"auto", "S", "T"}));
    solve->add_flag("--lattice", sf.lattice, "iterate on the q-lattice even for a polynomial rhs");
    solve->callback([&] { action = [&] { return run_solve(sf); }; });

    CLI::App* amb = app.add_subcommand("ambartsumian", "D y + y = y(x/v)/v");
    add_st(amb);
    amb->add_option("--v", v)->required();
    amb->add_option("--xi", xi);
    amb->add_option("--N", N)->check(CLI::NonNegativeNumber);
    amb->add_option("--x-max", x_max);
    amb->callback([&] {
        action = [&] {
            const Literal ls = literal(s, "s"), lt = literal(t, "t"), lv = literal(v, "v"), lxi = literal(xi, "xi");
            Json j = header("ambartsumian");
            j["exact"] = all_exact({ls, lt, lv, lxi});
            const Json report = dispatch(j["exact"].get<bool>(), [&](auto tag) -> Json {
                using T = decltype(tag);
                return to_json(ambartsumian<T>(make_params(as<T>(ls), as<T>(lt)), as<T>(lv), as<T>(lxi), N, x_max));
            });
            for (const auto& [key, value] : report.items()) j[key] = value;
            return j;
        };
    });

    CLI::App* bell = app.add_subcommand("bell", "partial Bell polynomial B_{n,k}(x_1, ...)");
    bell->add_option("--n", n)->required();
    bell->add_option("--k", k)->required();
    bell->add_option("--x", xlist, "comma-separated x_1,...,x_{n-k+1}")->required();
    bell->callback([&] {
        action = [&] {
            std::vector<Literal> xs;
            std::stringstream ss(xlist);
            for (std::string item; std::getline(ss, item, ',');) xs.push_back(literal(item, "x"));
            bool exact = true;
            for (const Literal& l : xs) exact = exact && l.exact;
            Json j = header("bell");
            j["n"] = n;
            j["k"] = k;
            j["exact"] = exact;
            j["value"] = dispatch(exact, [&](auto tag) -> Json {
                using T = decltype(tag);
                std::vector<T> vals;
                for (const Literal& l : xs) vals.push_back(as<T>(l));
                return to_json_value(partial_bell(BellArgs<T>(n, k, std::move(vals))));
            });
            return j;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        const Json doc = action();
        if (format == "csv") {
            write_csv(doc, out);
        } else {
            out << doc.dump(2) << "\n";
        }
        return kOk;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << to_json(e).dump(2) << "\n";
        switch (e.code()) {
            case ErrorCode::SyntaxError: return kUsage;
            case ErrorCode::NonConvergentSum:
            case ErrorCode::NonConvergentIteration: return kNonConvergent;
            default: return kDomainFailure;
        }
    }
}

}  // namespace stcalc::cli
