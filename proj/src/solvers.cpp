#include "stcalc/solvers.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <tuple>

namespace stcalc {

std::string label_name(RegionLabel label) {
    static const char* const names[] = {"S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "T1",
                                        "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "None"};
    return names[static_cast<int>(label)];
}

namespace {

using RhsFn = std::function<double(double, double, double)>;

ConvergenceClass scaled(ConvergenceClass c, double factor) {
    if (c.kind == ConvergenceKind::Disk) c.radius = *c.radius / factor;
    return c;
}

template <Scalar T>
bool is_zero(const T& v) {
    if constexpr (is_exact_v<T>) {
        return v == 0;
    } else {
        return std::abs(v) <= 1e-12;
    }
}

struct RootSigns {
    int q;        // sign(|q~| - 1)
    int root;     // sign(|root| - 1) for the root the set is built on
    int other;    // sign(|other root| - 1)
    int u;        // sign(|root| - u)
    double gap;   // |1 - q~|
};

// Matches the nine sets of one family. `base` is S1 or T1.
std::optional<Region> match_family(const RootSigns& r, RegionLabel base, double a, double b, bool a_plus_b_zero) {
    const auto label = [base](int k) { return static_cast<RegionLabel>(static_cast<int>(base) + k - 1); };
    if (r.u > 0) {
        const std::string branch = "|u|<|root|";
        if (r.q != 0 && r.root > 0) return Region{label(1), entire(), branch};
        if (r.q > 0 && r.root <= 0 && r.other > 0) return Region{label(2), entire(), branch};
        if (r.q < 0 && r.root == 0) return Region{label(3), disk(1.0 / (r.gap * std::abs(a))), branch};
        if (r.q < 0 && r.root < 0) return Region{label(4), point_only(), branch};
        if (r.q > 0 && r.other < 0) return Region{label(5), point_only(), branch};
        return std::nullopt;
    }
    if (r.u == 0) {
        const std::string branch = "|u|=|root|";
        if (r.q > 0 && r.root > 0) return Region{label(6), entire(), branch};
        if (r.q < 0 && r.root == 0 && a_plus_b_zero) return Region{label(7), entire(), branch};
        if (r.q < 0 && r.root > 0) return Region{label(8), disk(1.0 / (std::abs(b) * r.gap)), branch};
        if (r.q < 0 && r.root == 0) return Region{label(9), disk(1.0 / (std::abs(a + b) * r.gap)), branch};
    }
    return std::nullopt;
}

double apply_domain(double x_max, const std::optional<ConvergenceClass>& domain, std::string* binding = nullptr) {
    if (binding) *binding = "x_max";
    if (!domain) return x_max;
    if (domain->kind == ConvergenceKind::PointOnly) {
        throw Error(ErrorCode::OutsideDomain, "solvers", "solution series converges only at 0");
    }
    if (domain->kind == ConvergenceKind::Disk && 0.9 * *domain->radius < x_max) {
        if (binding) *binding = "radius";
        return 0.9 * *domain->radius;
    }
    return x_max;
}

// Sum a_n x^n/{n}! by Horner on the rescaled coefficients.
RealFn egf_function(const TruncatedEgf<double>& f) {
    const auto seq = st_numbers(f.params(), f.order());
    std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
    double fact = 1;
    for (int n = 1; n <= f.order(); ++n) {
        fact *= seq[n];
        c[n] /= fact;
    }
    return [c = std::move(c)](double x) {
        double acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
}

void fill_residuals(SolveReport& report, const RealFn& y, const RhsFn& rhs, const StParams<double>& p, double u,
                    double x_max) {
    report.interval = x_max;
    report.lattice.clear();
    report.max_residual = 0;
    for (const double x : residual_lattice(p, x_max)) {
        const double yx = y(x);
        const double r = std::abs(st_derivative(y, p, 1.0, x) - rhs(x, yx, y(u * x)));
        report.lattice.push_back({x, yx, r});
        report.max_residual = std::max(report.max_residual, r);
    }
}

template <Scalar T>
void attach_series(SolveReport& report, TruncatedEgf<T> series) {
    if constexpr (is_exact_v<T>) {
        report.series = series.to_double();
        report.exact_series = std::move(series);
    } else {
        report.series = std::move(series);
    }
}

template <Scalar T>
void require_admissible_u(const StParams<T>& p, const T& u) {
    if (!(u > 0)) throw Error(ErrorCode::DomainError, "solvers", "u must be positive");
    if (compare_abs_root(p, Root::Phi, u) < 0 && compare_abs_root(p, Root::PhiPrime, u) < 0) {
        throw Error(ErrorCode::OutsideDomain, "solvers", "u exceeds both |phi| and |phi'|");
    }
}

void require_order(int N) {
    if (N < 0) throw Error(ErrorCode::DomainError, "solvers", "N must be nonnegative");
}

}  // namespace

template <Scalar T>
Region classify_E(const StParams<T>& p, const T& u, const T& a, const T& b, Regime regime) {
    if (!(u > 0)) throw Error(ErrorCode::DomainError, "solvers", "u must be positive");
    if (a == 0 && b == 0) throw Error(ErrorCode::DomainError, "solvers", "a and b cannot both vanish");
    const StParams<double> pd = p.to_double_params();
    const double ad = to_double(a);
    const double bd = to_double(b);
    if (b == 0) return {RegionLabel::None, scaled(exp_domain(pd, 1.0), std::abs(ad)), "b=0"};
    if (a == 0) return {RegionLabel::None, scaled(exp_domain(pd, to_double(u)), std::abs(bd)), "a=0"};
    if (p.degenerate_q()) return {RegionLabel::None, std::nullopt, "|q|=1"};

    const int q_sign = compare_abs_q_one(p);
    const int phi_one = compare_abs_root(p, Root::Phi, T(1));
    const int phip_one = compare_abs_root(p, Root::PhiPrime, T(1));
    const bool sum_zero = is_zero<T>(a + b);
    const RootSigns s_signs{q_sign, phi_one, phip_one, compare_abs_root(p, Root::Phi, u), std::abs(1.0 - pd.q())};
    const RootSigns t_signs{-q_sign, phip_one, phi_one, compare_abs_root(p, Root::PhiPrime, u),
                            std::abs(1.0 - 1.0 / pd.q())};
    if (regime != Regime::T) {
        if (auto r = match_family(s_signs, RegionLabel::S1, ad, bd, sum_zero)) return *r;
    }
    if (regime != Regime::S) {
        if (auto r = match_family(t_signs, RegionLabel::T1, ad, bd, sum_zero)) return *r;
    }
    return {RegionLabel::None, std::nullopt, "no listed set matches"};
}

std::vector<double> residual_lattice(const StParams<double>& p, double x_max) {
    double rho = 0.5;
    double c = 1.0 / std::abs(p.phi());
    if (!p.degenerate_q()) {
        const QLattice lat(1.0, p);
        rho = lat.ratio();
        c = std::abs(lat.scale());
    }
    std::vector<double> xs;
    double x = x_max * c;
    for (int j = 0; j < kResidualPoints; ++j) {
        xs.push_back(x);
        x *= rho;
    }
    return xs;
}

template <Scalar T>
SolveReport solve_linear_pantograph(const StParams<T>& p, const T& a, const T& u, const T& xi, int N, double x_max) {
    require_order(N);
    require_admissible_u(p, u);
    const StParams<double> pd = p.to_double_params();
    const double ad = to_double(a);
    const double ud = to_double(u);
    std::vector<T> c;
    T an = xi;
    for (int n = 0; n <= N; ++n) {
        c.push_back(an * pow_int(u, choose2(n)));
        an *= a;
    }
    SolveReport report;
    attach_series(report, TruncatedEgf<T>(p, std::move(c)));
    const ConvergenceClass domain = a == 0 ? entire() : scaled(exp_domain(pd, ud), std::abs(ad));
    const double h = apply_domain(x_max, domain, &report.binding);
    fill_residuals(report, egf_function(*report.series), [ad](double, double, double yu) { return ad * yu; }, pd, ud,
                   h);
    return report;
}

namespace {

double modulated_value(const StParams<double>& p, double a, double u, const QPeriodic& G, double x, int N) {
    if (p.degenerate_q()) throw Error(ErrorCode::DegenerateQ, "solvers", "q-periodic modulation needs q != 1");
    if (p.q() < 0) throw Error(ErrorCode::Unsupported, "solvers", "q-periodic modulation needs q > 0");
    if (!(G.params() == p)) throw Error(ErrorCode::ParamMismatch, "solvers", "G is periodic for another q");
    if (a != 0 && !scaled(exp_domain(p, u), std::abs(a)).admits(x)) {
        throw Error(ErrorCode::OutsideDomain, "solvers", "modulated series diverges at this x");
    }
    const auto seq = st_numbers(p, N);
    double w = 1;    // u^C(n,2) a^n x^n/{n}!
    double arg = x;  // u^n x/phi^n
    double sum = 0;
    for (int n = 0; n <= N; ++n) {
        if (w == 0) break;
        sum += w * q_periodic_eval(G, std::abs(arg));
        if (n < N) {
            w *= std::pow(u, n) * a * x / seq[n + 1];
            arg *= u / p.phi();
        }
    }
    return sum;
}

}  // namespace

double modulated_solution(const StParams<double>& p, double a, double u, const QPeriodic& G, double x, int N) {
    if (!(x > 0)) throw Error(ErrorCode::DomainError, "solvers", "modulated solutions are defined for x > 0");
    require_order(N);
    return modulated_value(p, a, u, G, x, N);
}

double modulated_max_residual(const StParams<double>& p, double a, double u, const QPeriodic& G, int N,
                              double x_max) {
    require_order(N);
    const RealFn y = [&](double x) { return modulated_value(p, a, u, G, x, N); };
    double worst = 0;
    for (const double x : residual_lattice(p, x_max)) {
        worst = std::max(worst, std::abs(st_derivative(y, p, 1.0, x) - a * y(u * x)));
    }
    return worst;
}

template <Scalar T>
SolveReport two_term_pantograph(const StParams<T>& p, const T& a, const T& b, const T& u, int N, double x_max) {
    require_order(N);
    if (!(u > 0)) throw Error(ErrorCode::DomainError, "solvers", "u must be positive");
    const StParams<double> pd = p.to_double_params();
    const double ad = to_double(a);
    const double bd = to_double(b);
    SolveReport report;
    attach_series(report, TruncatedEgf<T>(p, RisingFactor<T>{a, b, u}.values(N)));
    std::optional<ConvergenceClass> domain = entire();
    if (!(a == 0 && b == 0)) {
        report.region = classify_E(p, u, a, b);
        domain = report.region->domain;
    }
    const double h = apply_domain(x_max, domain, &report.binding);
    fill_residuals(
        report, egf_function(*report.series), [ad, bd](double, double y, double yu) { return ad * y + bd * yu; },
        pd, to_double(u), h);
    return report;
}

double Eq_product(double q, double a, double b, double z, int K) {
    if (K < 0) throw Error(ErrorCode::DomainError, "solvers", "K must be nonnegative");
    if (q == 0 || std::abs(q) == 1) throw Error(ErrorCode::DomainError, "solvers", "need 0 < |q| != 1");
    const bool small = std::abs(q) < 1;
    const double ratio = small ? q : 1.0 / q;
    const double c = small ? 1.0 - q : 1.0 / q - 1.0;
    const double num_sign = small ? b : -a;
    const double den_sign = small ? -a : b;
    double prod = 1;
    double rk = 1;
    for (int k = 0; k < K; ++k) {
        const double w = c * rk * z;
        const double den = 1 + den_sign * w;
        if (std::abs(den) < 1e-14) throw Error(ErrorCode::PoleHit, "solvers", "z hits a pole of the product");
        prod *= (1 + num_sign * w) / den;
        rk *= ratio;
    }
    return prod;
}

template <Scalar T>
SolveReport ambartsumian(const StParams<T>& p, const T& v, const T& xi, int N, double x_max) {
    require_order(N);
    if (!(v > 1)) throw Error(ErrorCode::DomainError, "solvers", "v must exceed 1");
    const T w = T(1) / v;
    std::vector<T> c = RisingFactor<T>{T(-1), w, w}.values(N);
    for (T& cn : c) cn *= xi;
    SolveReport report;
    attach_series(report, TruncatedEgf<T>(p, std::move(c)));
    report.region = classify_E(p, w, T(-1), w);
    const double h = apply_domain(x_max, report.region->domain, &report.binding);
    const double wd = to_double(w);
    fill_residuals(
        report, egf_function(*report.series), [wd](double, double y, double yu) { return -y + wd * yu; },
        p.to_double_params(), wd, h);
    return report;
}

template <Scalar T>
std::vector<T> bell_power_coefficients(const StParams<T>& p, std::span<const T> f_derivs, const T& u, const T& y0,
                                       int N) {
    require_order(N);
    if (static_cast<int>(f_derivs.size()) < std::max(N, 1)) {
        throw Error(ErrorCode::DomainError, "solvers", "need f^(k)(y0) for k < N");
    }
    const auto seq = st_numbers(p, N);
    std::vector<T> pc{y0};
    T n_fact(1);
    for (int n = 0; n < N; ++n) {
        detail::require_nonzero_factor(seq[n + 1], n + 1);
        if (n == 0) {
            pc.push_back(f_derivs[0] / seq[1]);
            continue;
        }
        n_fact *= T(n);
        // j-th derivative of y(ux) at 0, j = 1..n
        std::vector<T> g;
        T uj(1);
        T j_fact(1);
        for (int j = 1; j <= n; ++j) {
            uj *= u;
            j_fact *= T(j);
            g.push_back(j_fact * uj * pc[j]);
        }
        T acc(0);
        for (int k = 1; k <= n; ++k) {
            if (f_derivs[k] == 0) continue;
            acc += f_derivs[k] * partial_bell<T>(n, k, std::span<const T>(g));
        }
        pc.push_back(acc / n_fact / seq[n + 1]);
    }
    return pc;
}

template <Scalar T>
std::vector<T> taylor_derivatives(const Expr& f, const T& y0, int N) {
    require_order(N);
    if (uses(f, Var::X)) throw Error(ErrorCode::Unsupported, "solvers", "autonomous f cannot depend on x");
    if (uses(f, Var::Y) && uses(f, Var::YU)) {
        throw Error(ErrorCode::Unsupported, "solvers", "autonomous f takes a single argument");
    }
    const PowerSeries<T> arg = PowerSeries<T>::variable(N, y0);
    const PowerSeries<T> series = evaluate_series<T>(f, Bindings<PowerSeries<T>>{PowerSeries<T>(N), arg, arg});
    std::vector<T> out;
    T k_fact(1);
    for (int k = 0; k <= N; ++k) {
        if (k > 0) k_fact *= T(k);
        out.push_back(series[k] * k_fact);
    }
    return out;
}

template <Scalar T>
SolveReport bell_autonomous_solve(const StParams<T>& p, const Expr& f, const T& u, const T& y0, int N,
                                  double x_max) {
    require_order(N);
    if (!(u > 0)) throw Error(ErrorCode::DomainError, "solvers", "u must be positive");
    const std::vector<T> derivs = taylor_derivatives<T>(f, y0, std::max(N, 1));
    const std::vector<T> pc = bell_power_coefficients<T>(p, std::span<const T>(derivs), u, y0, N);
    std::vector<T> c;
    for (int n = 0; n <= N; ++n) c.push_back(pc[n] * fibotorial(p, T(1), n));
    SolveReport report;
    attach_series(report, TruncatedEgf<T>(p, std::move(c)));
    report.binding = "x_max";
    fill_residuals(
        report, egf_function(*report.series),
        [&f](double, double, double yu) { return evaluate(f, 0.0, yu, yu); }, p.to_double_params(), to_double(u),
        x_max);
    return report;
}

RectangleBounds estimate_bounds(const Expr& rhs, double y0, double a, double b) {
    constexpr int kGrid = 9;
    RectangleBounds out{0, 0, 0};
    const auto at = [](double lo, double hi, int i) { return lo + (hi - lo) * i / (kGrid - 1); };
    for (int i = 0; i < kGrid; ++i) {
        const double x = at(0, a, i);
        for (int j = 0; j < kGrid; ++j) {
            const double y = at(y0 - b, y0 + b, j);
            for (int k = 0; k < kGrid; ++k) {
                const double yu = at(y0 - b, y0 + b, k);
                const double hy = 1e-6 * std::max(1.0, std::abs(y));
                const double hyu = 1e-6 * std::max(1.0, std::abs(yu));
                out.M = std::max(out.M, std::abs(evaluate(rhs, x, y, yu)));
                out.L1 = std::max(out.L1, std::abs(evaluate(rhs, x, y + hy, yu) - evaluate(rhs, x, y - hy, yu)) /
                                              (2 * hy));
                out.L2 = std::max(out.L2, std::abs(evaluate(rhs, x, y, yu + hyu) - evaluate(rhs, x, y, yu - hyu)) /
                                              (2 * hyu));
            }
        }
    }
    // Finite differences of exactly linear terms leave rounding noise.
    const auto clean = [](double v) { return v < 1e-7 ? 0.0 : v; };
    return {kLipschitzSafety * out.M, kLipschitzSafety * clean(out.L1), kLipschitzSafety * clean(out.L2)};
}

double approximation_error_bound(const StParams<double>& p, double M, double L1, double L2, double u, double a_dom,
                                 int iter_p, int N) {
    if (!(M >= 0 && L1 >= 0 && L2 >= 0 && u > 0 && a_dom > 0) || iter_p < 0 || N < 0) {
        throw Error(ErrorCode::DomainError, "solvers", "error bound needs nonnegative M, L1, L2 and positive u, a");
    }
    if (L1 + L2 == 0) return 0;
    const StParams<double> pa = make_params(std::abs(p.s()), p.t());
    const double up = std::pow(u, iter_p + 1);
    const double b = L2 * up;
    const Region region = classify_E(pa, u, L1, b);
    if (!region.domain) {
        throw Error(ErrorCode::OutsideDomain, "solvers", "no classification for the majorant series");
    }
    if (!region.domain->admits(a_dom)) {
        throw Error(ErrorCode::OutsideDomain, "solvers", "majorant series diverges at a");
    }
    const auto seq = st_numbers(pa, std::max(N, iter_p + 1));
    double E = 0;
    double term = 1;  // (L1 (+) b)^n a^n/{n}!
    double uk = 1;
    for (int n = 0; n <= N; ++n) {
        E += term;
        if (n == N) break;
        detail::require_nonzero_factor(seq[n + 1], n + 1);
        term *= (L1 + b * uk) * a_dom / seq[n + 1];
        uk *= u;
        if (std::abs(term) < 1e-18 * std::abs(E)) break;
    }
    double lead = M * RisingFactor<double>{L1, L2, u}.value(iter_p + 1) / (L1 + L2);
    for (int n = 1; n <= iter_p + 1; ++n) lead *= a_dom / seq[n];
    return lead * E;
}

namespace {

struct Interval {
    double h;
    std::string binding;
    RectangleBounds bounds;
    std::optional<Region> region;
};

template <Scalar T>
Interval existence_interval(const EquationSpec<T>& spec, int iterations, const ApproximationOptions& opts) {
    const double y0 = to_double(spec.y0);
    const bool need_estimate = !opts.M || !opts.L1 || !opts.L2;
    const RectangleBounds est =
        need_estimate ? estimate_bounds(spec.rhs, y0, opts.a_dom, opts.b) : RectangleBounds{0, 0, 0};
    Interval out{opts.a_dom, "a", {opts.M.value_or(est.M), opts.L1.value_or(est.L1), opts.L2.value_or(est.L2)}, {}};
    if (out.bounds.M > 0 && opts.b / out.bounds.M < out.h) {
        out.h = opts.b / out.bounds.M;
        out.binding = "b/M";
    }
    if (out.bounds.L1 + out.bounds.L2 > 0) {
        const StParams<double> pd = spec.params.to_double_params();
        const double ud = to_double(spec.u);
        const StParams<double> pa = make_params(std::abs(pd.s()), pd.t());
        out.region =
            classify_E(pa, ud, out.bounds.L1, out.bounds.L2 * std::pow(ud, iterations + 1), opts.regime);
        const auto& d = out.region->domain;
        if (d && d->kind == ConvergenceKind::Disk && 0.9 * *d->radius < out.h) {
            out.h = 0.9 * *d->radius;
            out.binding = "radius";
        }
    }
    return out;
}

template <Scalar T>
void check_regime(const EquationSpec<T>& spec, Regime regime) {
    if (!(spec.u > 0)) throw Error(ErrorCode::DomainError, "solvers", "u must be positive");
    const bool s_ok = compare_abs_root(spec.params, Root::Phi, spec.u) >= 0;
    const bool t_ok = compare_abs_root(spec.params, Root::PhiPrime, spec.u) >= 0;
    const bool ok = regime == Regime::S ? s_ok : regime == Regime::T ? t_ok : (s_ok || t_ok);
    if (!ok) throw Error(ErrorCode::OutsideDomain, "solvers", "u lies outside the admissible interval");
}

class DivergenceWatch {
public:
    void push(double diff) {
        if (last_ > 0 && diff > last_) {
            if (++growth_ >= 3) {
                throw Error(ErrorCode::NonConvergentIteration, "solvers", "successive differences keep growing");
            }
        } else {
            growth_ = 0;
        }
        last_ = diff;
    }

private:
    double last_ = -1;
    int growth_ = 0;
};

// Iterates phi_{k+1}(X) = y0 + sum_i (1-rho) X rho^i f(P_i, phi_k(P_i), phi_k(u P_i)) with
// P_i = X rho^i c. Every point reached is x0 rho^n u^m c^j, so values are memoized on (k, n, m, j).
class LatticeIteration {
public:
    LatticeIteration(const StParams<double>& p, const Expr& rhs, double u, double y0, double x_max)
        : rhs_(rhs), u_(u), y0_(y0) {
        const QLattice lat(1.0, p);
        rho_ = lat.ratio();
        c_ = lat.scale();
        x0_ = c_ < 0 ? -x_max : x_max;
        terms_ = std::min(400, static_cast<int>(std::ceil(std::log(1e-17) / std::log(std::abs(rho_)))));
    }

    double point(int n, int m, int j) const {
        return x0_ * std::pow(rho_, n) * std::pow(u_, m) * std::pow(c_, j);
    }

    double value(int k, int n, int m, int j) {
        if (k == 0) return y0_;
        const auto key = std::make_tuple(k, n, m, j);
        if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
        const double X = point(n, m, j);
        double sum = 0;
        double comp = 0;
        for (int i = 0; i < terms_; ++i) {
            const double P = point(n + i, m, j + 1);
            const double f = evaluate(rhs_, P, value(k - 1, n + i, m, j + 1), value(k - 1, n + i, m + 1, j + 1));
            const double term = (1 - rho_) * X * std::pow(rho_, i) * f;
            const double t = sum + term;
            comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
        const double v = y0_ + sum + comp;
        memo_.emplace(key, v);
        return v;
    }

    double rho() const noexcept { return rho_; }

private:
    const Expr& rhs_;
    double u_;
    double y0_;
    double rho_ = 0;
    double c_ = 0;
    double x0_ = 0;
    int terms_ = 0;
    std::map<std::tuple<int, int, int, int>, double> memo_;
};

}  // namespace

template <Scalar T>
SolveReport successive_approximation(const EquationSpec<T>& spec, int iterations, int N,
                                     const ApproximationOptions& opts) {
    if (spec.eta != 0) throw Error(ErrorCode::Unsupported, "solvers", "only initial data at x = 0 is supported");
    if (iterations < 0) throw Error(ErrorCode::DomainError, "solvers", "iterations must be nonnegative");
    require_order(N);
    check_regime(spec, opts.regime);
    const StParams<double> pd = spec.params.to_double_params();
    const double ud = to_double(spec.u);
    const double y0d = to_double(spec.y0);
    const Interval iv = existence_interval(spec, iterations, opts);

    SolveReport report;
    report.region = iv.region;
    report.binding = iv.binding;
    report.interval = iv.h;
    const std::vector<double> xs = residual_lattice(pd, iv.h);
    DivergenceWatch watch;

    if (to_polynomial(spec.rhs) && !opts.lattice_mode) {
        const auto seq = st_numbers(spec.params, N);
        for (int n = 1; n <= N; ++n) detail::require_nonzero_factor(seq[n], n);
        PowerSeries<T> phi(N, spec.y0);
        const PowerSeries<T> x = PowerSeries<T>::variable(N, T(0));
        for (int k = 0; k < iterations; ++k) {
            PowerSeries<T> phi_u = phi;
            T un(1);
            for (int n = 0; n <= N; ++n) {
                phi_u[n] *= un;
                un *= spec.u;
            }
            const PowerSeries<T> f = evaluate_series<T>(spec.rhs, Bindings<PowerSeries<T>>{x, phi, phi_u});
            PowerSeries<T> next(N, spec.y0);
            for (int n = 0; n < N; ++n) next[n + 1] = f[n] / seq[n + 1];
            double diff = 0;
            for (const double xv : xs) diff = std::max(diff, std::abs(next.evaluate(xv) - phi.evaluate(xv)));
            report.differences.push_back(diff);
            watch.push(diff);
            phi = std::move(next);
        }
        std::vector<T> c;
        T fact(1);
        for (int n = 0; n <= N; ++n) {
            if (n > 0) fact *= seq[n];
            c.push_back(phi[n] * fact);
        }
        attach_series(report, TruncatedEgf<T>(spec.params, std::move(c)));
        fill_residuals(
            report, [phi](double xv) { return phi.evaluate(xv); },
            [&spec](double xv, double y, double yu) { return evaluate(spec.rhs, xv, y, yu); }, pd, ud, iv.h);
    } else {
        if (pd.degenerate_q()) throw Error(ErrorCode::DegenerateQ, "solvers", "lattice mode needs q != 1");
        LatticeIteration it(pd, spec.rhs, ud, y0d, iv.h);
        for (int k = 1; k <= iterations; ++k) {
            double diff = 0;
            for (int j = 0; j < kResidualPoints; ++j) {
                diff = std::max(diff, std::abs(it.value(k, j, 0, 1) - it.value(k - 1, j, 0, 1)));
            }
            report.differences.push_back(diff);
            watch.push(diff);
        }
        const int K = iterations;
        // phi x_j and phi' x_j are x0 rho^j and x0 rho^{j+1}, whichever root carries c.
        const double dphi = pd.phi() - pd.phi_prime();
        const bool small = compare_abs_q_one(pd) < 0;
        for (int j = 0; j < kResidualPoints; ++j) {
            const double x = it.point(j, 0, 1);
            const double y = it.value(K, j, 0, 1);
            const double y_inner = it.value(K, j, 0, 0);
            const double y_outer = it.value(K, j + 1, 0, 0);
            const double y_phi = small ? y_inner : y_outer;
            const double y_phip = small ? y_outer : y_inner;
            const double d = (y_phi - y_phip) / (dphi * x);
            const double r = std::abs(d - evaluate(spec.rhs, x, y, it.value(K, j, 1, 1)));
            report.lattice.push_back({x, y, r});
            report.max_residual = std::max(report.max_residual, r);
        }
    }

    if (iv.region && iv.region->domain && iv.region->domain->admits(iv.h)) {
        try {
            report.error_bound = approximation_error_bound(pd, iv.bounds.M, iv.bounds.L1, iv.bounds.L2, ud, iv.h,
                                                           iterations, std::max(N, 64));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutsideDomain) throw;
        }
    } else if (iv.bounds.L1 + iv.bounds.L2 == 0) {
        report.error_bound = 0.0;
    }
    return report;
}

#define STCALC_INSTANTIATE(T)                                                                                      \
    template Region classify_E<T>(const StParams<T>&, const T&, const T&, const T&, Regime);                     \
    template SolveReport solve_linear_pantograph<T>(const StParams<T>&, const T&, const T&, const T&, int, double); \
    template SolveReport two_term_pantograph<T>(const StParams<T>&, const T&, const T&, const T&, int, double);     \
    template SolveReport ambartsumian<T>(const StParams<T>&, const T&, const T&, int, double);                      \
    template std::vector<T> bell_power_coefficients<T>(const StParams<T>&, std::span<const T>, const T&, const T&,  \
                                                       int);                                                        \
    template std::vector<T> taylor_derivatives<T>(const Expr&, const T&, int);                                      \
    template SolveReport bell_autonomous_solve<T>(const StParams<T>&, const Expr&, const T&, const T&, int, double); \
    template SolveReport successive_approximation<T>(const EquationSpec<T>&, int, int, const ApproximationOptions&);

STCALC_INSTANTIATE(double)
STCALC_INSTANTIATE(Rational)

}  // namespace stcalc
