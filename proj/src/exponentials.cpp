#include "stcalc/exponentials.hpp"

#include <cmath>

namespace stcalc {

namespace {

constexpr int kMaxSeriesTerms = 100000;
constexpr int kMaxProductFactors = 100000;
constexpr double kFactorUnityTol = 1e-15;
constexpr double kPoleTol = 1e-14;

// Upper bound on |w_{m+1}/w_m| for every m >= n, where w_m = u^C(m,2) z^m/{m}!.
class RatioBound {
public:
    RatioBound(const StParams<double>& p, double u, double z) : z_(std::abs(z)), degenerate_(p.degenerate_q()) {
        if (degenerate_) {
            rho_ = std::abs(p.phi());
        } else {
            const auto [root, gap] = dominant_root(p);
            rho_ = std::abs(root == Root::Phi ? p.phi() : p.phi_prime());
            gap_ = gap;
            qt_ = root == Root::Phi ? std::abs(p.q()) : std::abs(1.0 / p.q());
        }
        ur_ = std::abs(u) / rho_;
        if (ur_ > 1 && ur_ <= 1 + detail::kRootTol) ur_ = 1;
    }

    double at(int n) const {
        const double un = std::pow(ur_, n);
        if (degenerate_) return z_ * un / (n + 1);
        return z_ * un * gap_ / (1 - std::pow(qt_, n + 1));
    }

private:
    double z_;
    bool degenerate_;
    double rho_ = 1;
    double gap_ = 0;
    double qt_ = 0;
    double ur_ = 0;
};

}  // namespace

ConvergenceClass exp_domain(const StParams<double>& p, double u) {
    const double au = std::abs(u);
    if (au == 0) return entire();
    if (p.degenerate_q()) return au <= std::abs(p.phi()) * (1 + detail::kRootTol) ? entire() : point_only();
    const auto [root, gap] = dominant_root(p);
    const int cmp = compare_abs_root(p, root, au);
    if (cmp > 0) return entire();
    if (cmp < 0) return point_only();
    return disk(1.0 / gap);
}

SeriesValue exp_st(const StParams<double>& p, double u, double z, double tol) {
    if (!exp_domain(p, u).admits(z)) {
        throw Error(ErrorCode::OutsideDomain, "exponentials", "exp_{s,t}(z,u) diverges at this z");
    }
    if (z == 0) return {1.0, 0.0, 1};
    if (u == 0) return {1.0 + z, 0.0, 2};
    const RatioBound bound(p, u, z);
    const double s = p.s();
    const double t = p.t();
    double prev = 0;  // {n}
    double cur = 1;   // {n+1}
    double w = 1;     // u^C(n,2) z^n/{n}!
    double upow = 1;  // u^n
    double sum = 0;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        sum += w;
        const double rb = bound.at(n);
        if (rb < 1) {
            const double tail = std::abs(w) * rb / (1 - rb);
            if (tail < tol) return {sum, tail, n + 1};
        }
        w *= upow * z / cur;
        upow *= u;
        const double next = s * cur + t * prev;
        prev = cur;
        cur = next;
    }
    throw Error(ErrorCode::NonConvergentSum, "exponentials", "series did not reach the tolerance");
}

double exp_product(const StParams<double>& p, ExpKind kind, double z, std::optional<int> K) {
    if (p.degenerate_q()) throw Error(ErrorCode::DegenerateQ, "exponentials", "product form needs q != 1");
    if (kind.kind == ExpKind::Kind::Deformed) {
        throw Error(ErrorCode::Unsupported, "exponentials", "only Exp and Exp' have product forms");
    }
    if (K && *K < 0) throw Error(ErrorCode::DomainError, "exponentials", "K must be nonnegative");
    const bool small = compare_abs_q_one(p) < 0;
    const double q = p.q();
    const double qt = small ? q : 1.0 / q;
    const double c = small ? 1.0 - q : 1.0 / q - 1.0;
    const bool is_exp = kind.kind == ExpKind::Kind::Exp;
    // Factors sit in the denominator for Exp with |q| < 1 and Exp' with |q| > 1.
    const bool reciprocal = is_exp == small;
    const double sgn = is_exp ? -1.0 : 1.0;
    const int cap = K ? *K : kMaxProductFactors;
    double prod = 1;
    double qk = 1;
    for (int k = 0; k < cap; ++k) {
        const double delta = c * qk * z;
        if (!K && std::abs(delta) < kFactorUnityTol) return prod;
        const double factor = 1 + sgn * delta;
        if (reciprocal) {
            if (std::abs(factor) < kPoleTol) throw Error(ErrorCode::PoleHit, "exponentials", "z is a product pole");
            prod /= factor;
        } else {
            prod *= factor;
        }
        qk *= qt;
    }
    if (!K) throw Error(ErrorCode::NonConvergentSum, "exponentials", "product factors did not approach 1");
    return prod;
}

double pq_power(const PqPower& arg) {
    if (arg.n < 0) throw Error(ErrorCode::DomainError, "exponentials", "n must be nonnegative");
    double prod = 1;
    for (int k = 0; k < arg.n; ++k) prod *= std::pow(arg.p, k) * arg.x - std::pow(arg.q, k) * arg.a;
    return prod;
}

double pq_power_expanded(const PqPower& arg) {
    if (arg.n < 0) throw Error(ErrorCode::DomainError, "exponentials", "n must be nonnegative");
    const StParams<double> pp = make_params(arg.p + arg.q, -arg.p * arg.q);
    double sum = 0;
    for (int k = 0; k <= arg.n; ++k) {
        const int m = arg.n - k;
        sum += fibonomial(pp, 1.0, arg.n, k) * std::pow(arg.p, static_cast<double>(choose2(k))) *
               std::pow(arg.q, static_cast<double>(choose2(m))) * std::pow(arg.x, k) * std::pow(-arg.a, m);
    }
    return sum;
}

double binomial_exp(const StParams<double>& p, double a, double x, double y, int N) {
    const SeriesValue e1 = exp_st(p, p.phi(), a * x);
    const SeriesValue e2 = exp_st(p, p.phi_prime(), -a * y);
    if (e1.terms > N || e2.terms > N) {
        throw Error(ErrorCode::NonConvergentSum, "exponentials", "more than N terms needed");
    }
    return e1.value * e2.value;
}

InequalityReport exp_inequality_report(const StParams<double>& p, double u, std::span<const double> x_grid,
                                       const InequalityQuery& query) {
    const bool small = compare_abs_q_one(p) < 0;
    InequalityReport report{small ? u < p.phi_prime() : u < p.phi(), {}, 0};
    const StParams<double> ps = make_params(query.s_other, p.t());
    const StParams<double> pt = make_params(p.s(), query.t_other);
    const auto compare_param = [](double mine, double other, double value, double other_value) {
        if (mine < other) return value > other_value;
        if (mine > other) return value < other_value;
        return value == other_value;
    };
    for (const double x : x_grid) {
        if (x < 0) {
            ++report.skipped_negative;
            continue;
        }
        InequalityRow row{};
        row.x = x;
        row.exp_u = exp_st(p, u, x).value;
        row.exp_v = exp_st(p, query.v, x).value;
        row.chain_mid = exp_st(p, small ? p.phi_prime() : p.phi(), x).value;
        row.chain_top = std::exp(x);
        row.exp_s_other = exp_st(ps, u, x).value;
        row.exp_t_other = exp_st(pt, u, x).value;
        if (x == 0) {
            row.chain_holds = row.exp_u == 1 && row.chain_mid == 1 && row.chain_top == 1;
            row.monotone_u = row.exp_u == row.exp_v;
            row.monotone_s = row.exp_u == row.exp_s_other;
            row.monotone_t = row.exp_u == row.exp_t_other;
        } else {
            row.chain_holds = row.exp_u < row.chain_mid && row.chain_mid < row.chain_top;
            row.monotone_u = 1 <= row.exp_u && (u <= query.v ? row.exp_u <= row.exp_v : row.exp_u >= row.exp_v);
            row.monotone_s = compare_param(p.s(), query.s_other, row.exp_u, row.exp_s_other);
            row.monotone_t = compare_param(p.t(), query.t_other, row.exp_u, row.exp_t_other);
        }
        const double pole = small ? 1.0 / (1.0 - p.q()) : p.q() / (p.q() - 1.0);
        if (x > 0 && pole > 0 && x < pole) {
            const double other = exp_product(p, small ? ExpKind::exp() : ExpKind::exp_prime(), x);
            row.other_above_ex = std::exp(x) < other;
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace stcalc
