#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "stcalc/solvers.hpp"

using namespace stcalc;

namespace {

using R = Rational;

const double kTwoPi = 2 * std::numbers::pi;
const double kEps = std::numeric_limits<double>::epsilon();

/// sum_n c_n x^n / {n}! with the factorial built from the recurrence.
double ward_sum(double s, double t, std::span<const double> c, double x) {
    double sum = 0, fact = 1, xn = 1, prev = 0, cur = 1;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (n > 0) {
            fact *= cur;
            const double next = s * cur + t * prev;
            prev = cur;
            cur = next;
            xn *= x;
        }
        sum += c[n] * xn / fact;
    }
    return sum;
}

double ward_sum(const TruncatedEgf<double>& f, double x) {
    return ward_sum(f.params().s(), f.params().t(), f.coeffs(), x);
}

}  // namespace

TEST_CASE("rising factor") {
    const RisingFactor<R> r{R(2), R(3), R(1, 2)};
    CHECK(r.value(0) == 1);
    CHECK(r.value(3) == R(5) * R(7, 2) * R(11, 4));
    CHECK(r.values(6).back() == r.value(6));
    const RisingFactor<R> flat{R(2), R(-5), R(1)};
    for (int n = 0; n <= 6; ++n) CHECK(flat.value(n) == pow_int(R(-3), n));
}

TEST_CASE("residual lattice stays inside the interval") {
    for (const auto& [s, t] : std::array<std::pair<double, double>, 3>{{{5, -6}, {1, 1}, {-5, -6}}}) {
        const auto p = make_params(s, t);
        const auto xs = residual_lattice(p, 0.8);
        REQUIRE(xs.size() == kResidualPoints);
        for (const double x : xs) {
            CHECK(std::abs(p.phi() * x) <= 0.8 + 1e-15);
            CHECK(std::abs(p.phi_prime() * x) <= 0.8 + 1e-15);
        }
    }
}

TEST_CASE("linear pantograph worked example") {
    // f(3x) - f(2x) = x f(x/2), f(0) = 1
    const auto p = make_params(R(5), R(-6));
    const auto rep = solve_linear_pantograph(p, R(1), R(1, 2), R(1), 24);
    REQUIRE(rep.exact_series);
    for (int n = 0; n <= 24; ++n) CHECK((*rep.exact_series)[n] == pow_int(R(1, 2), choose2(n)));
    CHECK(rep.max_residual < 1e-8);
    CHECK(rep.lattice.size() == kResidualPoints);
    for (double x : {0.1, 0.25, 0.3}) {
        const double lhs = ward_sum(*rep.series, 3 * x) - ward_sum(*rep.series, 2 * x);
        CHECK(lhs == doctest::Approx(x * ward_sum(*rep.series, x / 2)).epsilon(1e-12));
    }
}

TEST_CASE("linear pantograph special cases") {
    const auto p = make_params(R(5), R(-6));
    const auto still = solve_linear_pantograph(p, R(0), R(1, 2), R(7), 10);
    CHECK((*still.exact_series)[0] == 7);
    for (int n = 1; n <= 10; ++n) CHECK((*still.exact_series)[n] == 0);

    // u = phi gives Exp.
    const auto big = solve_linear_pantograph(p, R(1), R(3), R(1), 24);
    const auto exp_c = exp_coefficients(p, R(3), 24);
    CHECK(*big.exact_series == exp_c);
    CHECK(big.max_residual < 1e-8);

    try {
        solve_linear_pantograph(p, R(1), R(4), R(1), 10);
        FAIL("u beyond both roots");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutsideDomain);
    }
}

TEST_CASE("modulated solutions") {
    const auto p = make_params(5.0, -6.0);
    const double a = 1.0, u = 0.5;
    const QPeriodic c([](double) { return 2.5; }, p);
    const QPeriodic zero([](double) { return 0.0; }, p);
    const QPeriodic wave([](double y) { return std::sin(kTwoPi * y); }, p);
    for (double x : {0.1, 0.5, 1.0, 2.0}) {
        const double e = exp_st(p, u, a * x).value;
        CHECK(modulated_solution(p, a, u, c, x, 40) == doctest::Approx(2.5 * e).epsilon(1e-12));
        CHECK(modulated_solution(p, a, u, zero, x, 40) == 0.0);
        CHECK(std::abs(modulated_solution(p, a, u, wave, x, 40)) <= e + 1e-12);
    }
    CHECK_THROWS_AS(modulated_solution(p, a, u, c, 0.0, 40), Error);
    try {
        modulated_solution(make_params(1.0, 1.0), a, u, QPeriodic([](double) { return 1.0; }, make_params(1.0, 1.0)),
                           0.5, 20);
        FAIL("q < 0");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
    try {
        modulated_solution(p, a, u, QPeriodic([](double) { return 1.0; }, make_params(3.0, -2.0)), 0.5, 20);
        FAIL("G built for another q");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParamMismatch);
    }
}

TEST_CASE("property: differently modulated solutions solve the same equation") {
    const auto p = make_params(5.0, -6.0);
    const double a = 1.0, u = 0.5;
    const QPeriodic family[] = {
        QPeriodic([](double) { return 1.0; }, p),
        QPeriodic([](double y) { return std::sin(kTwoPi * y); }, p),
        QPeriodic([](double y) { return 1 + 0.5 * std::cos(kTwoPi * y) - 0.25 * std::sin(2 * kTwoPi * y); }, p),
    };
    std::vector<double> at_half;
    for (const auto& G : family) {
        CHECK(modulated_max_residual(p, a, u, G, 40) < 1e-6);
        at_half.push_back(modulated_solution(p, a, u, G, 0.5, 40));
    }
    CHECK(at_half[0] != doctest::Approx(at_half[1]));
    CHECK(at_half[1] != doctest::Approx(at_half[2]));
}

TEST_CASE("two-term pantograph worked example") {
    // f(3x) - f(2x) = x f(x) + x f(x/2), f(0) = 1
    const auto p = make_params(R(5), R(-6));
    const auto rep = two_term_pantograph(p, R(1), R(1), R(1, 2), 24);
    REQUIRE(rep.region);
    CHECK(rep.region->label == RegionLabel::S1);
    CHECK(rep.region->domain->kind == ConvergenceKind::Entire);
    CHECK(rep.max_residual < 1e-8);
    for (int n = 0; n <= 24; ++n) {
        R prod(1);
        for (int k = 0; k < n; ++k) prod *= 1 + pow_int(R(1, 2), k);
        CHECK((*rep.exact_series)[n] == prod);
    }
    for (double x : {0.1, 0.2}) {
        const double lhs = ward_sum(*rep.series, 3 * x) - ward_sum(*rep.series, 2 * x);
        const double rhs = x * ward_sum(*rep.series, x) + x * ward_sum(*rep.series, x / 2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("two-term pantograph special values") {
    const auto p = make_params(R(5), R(-6));
    const auto no_delay = two_term_pantograph(p, R(3, 2), R(0), R(1, 2), 12);
    const auto no_delay_other_u = two_term_pantograph(p, R(3, 2), R(0), R(1, 5), 12);
    for (int n = 0; n <= 12; ++n) CHECK((*no_delay.exact_series)[n] == pow_int(R(3, 2), n));
    CHECK(*no_delay.exact_series == *no_delay_other_u.exact_series);
    const auto flat = two_term_pantograph(p, R(1, 3), R(1, 2), R(1), 12);
    for (int n = 0; n <= 12; ++n) CHECK((*flat.exact_series)[n] == pow_int(R(5, 6), n));
}

TEST_CASE("E_q product form") {
    CHECK(Eq_product(0.5, 1, -0.5, 1, 200) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(Eq_product(0.3, 1.7, -2.0, 0, 50) == 1.0);
    const double q = 1.0 / 3;
    CHECK(Eq_product(q, 1, 2, 0.1, 200) * Eq_product(q, 2, 1, -0.1, 200) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(Eq_product(0.5, 2, 0, 1, 10), Error);
}

TEST_CASE("property: E_q with inverted base swaps a and b") {
    oracle::Gen gen(81);
    for (int trial = 0; trial < 20; ++trial) {
        double q = gen.real(0.1, 0.9);
        if (gen.integer(0, 1)) q = -q;
        const double a = gen.real(-2, 2), b = gen.real(-2, 2);
        const double z = gen.real(-0.3, 0.3);
        CHECK(Eq_product(1 / q, a, b, z, 400) == doctest::Approx(Eq_product(q, b, a, z, 400)).epsilon(1e-10));
    }
}

TEST_CASE("property: E_q product equals the two-term series") {
    struct Case {
        double q, a, b, z;
    };
    const Case cases[] = {{0.5, 1, -0.3, 0.4}, {1.0 / 3, 0.5, 2, 0.7}, {0.2, 1, 1, 0.3}, {0.8, -1, 0.5, 1.5},
                          {2.0, 1, 0.5, 0.3}};
    for (const auto& c : cases) {
        const auto p = make_params(1 + c.q, -c.q);
        const auto rep = two_term_pantograph(p, c.a, c.b, c.q, 40);
        CHECK(ward_sum(*rep.series, c.z) == doctest::Approx(Eq_product(c.q, c.a, c.b, c.z, 600)).epsilon(1e-9));
    }
}

TEST_CASE("Ambartsumian equation") {
    const auto p = make_params(R(5), R(-6));
    const auto rep = ambartsumian(p, R(2), R(1), 24);
    CHECK((*rep.exact_series)[2] == R(3, 8));
    CHECK((*rep.exact_series)[2] / fibotorial(p, R(1), 2) == R(3, 40));
    CHECK(rep.max_residual < 1e-8);
    const auto zero = ambartsumian(p, R(2), R(0), 8);
    for (int n = 0; n <= 8; ++n) CHECK((*zero.exact_series)[n] == 0);
    const auto wide = ambartsumian(make_params(5.0, -6.0), 1e6, 1.0, 6);
    for (int n = 1; n <= 3; ++n) CHECK((*wide.series)[n] == doctest::Approx(n % 2 ? -1.0 : 1.0).epsilon(1e-5));
    CHECK_THROWS_AS(ambartsumian(p, R(1), R(1), 8), Error);
}

TEST_CASE("Bell solver examples") {
    const auto p = make_params(R(5), R(-6));
    const R u(1, 2);
    const auto lin = bell_autonomous_solve(p, parse_expr("3*y"), u, R(2), 12);
    const auto ref = solve_linear_pantograph(p, R(3), u, R(2), 12);
    CHECK(*lin.exact_series == *ref.exact_series);

    const auto flat = bell_autonomous_solve(p, parse_expr("7"), u, R(2), 8);
    CHECK((*flat.exact_series)[0] == 2);
    CHECK((*flat.exact_series)[1] == 7);
    for (int n = 2; n <= 8; ++n) CHECK((*flat.exact_series)[n] == 0);

    const auto sq = bell_autonomous_solve(make_params(5.0, -6.0), parse_expr("y^2"), 0.5, 1.0, 24);
    CHECK(sq.max_residual < 1e-6);
}

TEST_CASE("property: Bell solver and successive approximation agree") {
    const std::pair<const char*, const char*> cases[] = {{"y^2", "yu^2"}, {"2*y", "2*yu"}, {"y^3 - y/2", "yu^3 - yu/2"}};
    for (const auto& [f, rhs] : cases) {
        const auto p = make_params(R(5), R(-6));
        const R u(1, 2);
        const auto bell = bell_autonomous_solve(p, parse_expr(f), u, R(1), 8);
        const EquationSpec<R> spec{p, u, parse_expr(rhs), R(1)};
        ApproximationOptions opts;
        opts.a_dom = 0.1;
        const auto sa = successive_approximation(spec, 9, 8, opts);
        CHECK(*bell.exact_series == *sa.exact_series);

        const auto bd = bell_autonomous_solve(make_params(5.0, -6.0), parse_expr(f), 0.5, 1.0, 8);
        const EquationSpec<double> sd{make_params(5.0, -6.0), 0.5, parse_expr(rhs), 1.0};
        const auto sad = successive_approximation(sd, 9, 8, opts);
        for (int n = 0; n <= 8; ++n) {
            CHECK((*bd.series)[n] == doctest::Approx((*sad.series)[n]).epsilon(1e-9));
        }
    }
}

TEST_CASE("successive approximation reproduces partial sums") {
    const auto p = make_params(R(5), R(-6));
    const R u(1, 2);
    ApproximationOptions opts;
    opts.a_dom = 0.5;
    for (int k = 0; k <= 6; ++k) {
        const auto rep = successive_approximation(EquationSpec<R>{p, u, parse_expr("yu"), R(1)}, k, 10, opts);
        for (int n = 0; n <= 10; ++n) CHECK((*rep.exact_series)[n] == (n <= k ? pow_int(u, choose2(n)) : R(0)));

        const auto two = successive_approximation(EquationSpec<R>{p, u, parse_expr("2*y + 3*yu"), R(1)}, k, 10, opts);
        const auto rf = RisingFactor<R>{R(2), R(3), u}.values(10);
        for (int n = 0; n <= 10; ++n) CHECK((*two.exact_series)[n] == (n <= k ? rf[n] : R(0)));
    }
    const auto still = successive_approximation(EquationSpec<R>{p, u, parse_expr("0"), R(4)}, 5, 6, opts);
    CHECK(*still.exact_series == TruncatedEgf<R>(p, {4, 0, 0, 0, 0, 0, 0}));
    CHECK(*still.error_bound == 0.0);
    for (double d : still.differences) CHECK(d == 0.0);
}

TEST_CASE("successive approximation refusals") {
    const auto p = make_params(5.0, -6.0);
    EquationSpec<double> spec{p, 0.5, parse_expr("yu"), 1.0};
    spec.eta = 0.5;
    try {
        successive_approximation(spec, 3, 8);
        FAIL("eta != 0");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
    try {
        successive_approximation(EquationSpec<double>{p, 3.5, parse_expr("yu"), 1.0}, 3, 8);
        FAIL("u past phi");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutsideDomain);
    }
    ApproximationOptions t_only;
    t_only.regime = Regime::T;
    CHECK_THROWS_AS(successive_approximation(EquationSpec<double>{p, 2.5, parse_expr("yu"), 1.0}, 3, 8, t_only),
                    Error);
    // {n} shrinks to 0 here, so the iterates drift apart faster and faster.
    try {
        successive_approximation(EquationSpec<double>{make_params(0.3, -0.02), 0.1, parse_expr("y"), 1.0}, 12, 16);
        FAIL("iteration should diverge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonConvergentIteration);
    }
}

TEST_CASE("lattice mode matches series mode") {
    const auto p = make_params(5.0, -6.0);
    const EquationSpec<double> spec{p, 0.5, parse_expr("yu + x*y/2"), 1.0};
    ApproximationOptions opts;
    opts.a_dom = 0.5;
    const auto series = successive_approximation(spec, 5, 12, opts);
    opts.lattice_mode = true;
    const auto lattice = successive_approximation(spec, 5, 12, opts);
    REQUIRE(lattice.lattice.size() == kResidualPoints);
    CHECK(lattice.interval == series.interval);
    for (const auto& pt : lattice.lattice) {
        CHECK(pt.y == doctest::Approx(ward_sum(*series.series, pt.x)).epsilon(1e-10));
    }
    for (std::size_t k = 0; k < series.differences.size(); ++k) {
        CHECK(lattice.differences[k] == doctest::Approx(series.differences[k]).epsilon(1e-8).scale(1e-14));
    }
}

TEST_CASE("non-polynomial right-hand sides iterate on the lattice") {
    const auto p = make_params(5.0, -6.0);
    ApproximationOptions opts;
    opts.a_dom = 0.5;
    const auto rep = successive_approximation(EquationSpec<double>{p, 0.5, parse_expr("x/(1 + yu*yu)"), 1.0}, 6, 8, opts);
    CHECK_FALSE(rep.series);
    REQUIRE(rep.differences.size() == 6);
    for (std::size_t k = 1; k < rep.differences.size(); ++k) CHECK(rep.differences[k] <= rep.differences[k - 1]);
    CHECK(rep.differences.back() < 1e-6);
    CHECK(rep.max_residual < 1e-5);
}

TEST_CASE("error bound formula") {
    const auto p = make_params(5.0, -6.0);
    // L2 = 0: M L1^p a^(p+1) exp_{|s|,t}(L1 a) / {p+1}!
    {
        const double M = 1, L1 = 2, a = 0.5;
        const int ip = 3;
        double fact = 1;
        for (int n = 1; n <= ip + 1; ++n) fact *= std::pow(3.0, n) - std::pow(2.0, n);
        const double expected = M * std::pow(L1, ip) * std::pow(a, ip + 1) *
                                static_cast<double>(oracle::exp_partial(5, -6, 1, L1 * a, 80)) / fact;
        CHECK(approximation_error_bound(p, M, L1, 0, 0.5, a, ip, 80) == doctest::Approx(expected).epsilon(1e-12));
    }
    // M = L1 = L2 = 1, u = 1/2, a = 1/2, p = 5.
    {
        const double u = 0.5, a = 0.5;
        const int ip = 5;
        double lead = 1;
        for (int k = 0; k <= ip; ++k) lead *= 1 + std::pow(u, k);
        double fact = 1;
        for (int n = 1; n <= ip + 1; ++n) fact *= std::pow(3.0, n) - std::pow(2.0, n);
        const double b = std::pow(u, ip + 1);
        double E = 0;
        for (int n = 0; n < 80; ++n) {
            double term = std::pow(a, n);
            for (int k = 0; k < n; ++k) term *= (1 + b * std::pow(u, k)) / (std::pow(3.0, k + 1) - std::pow(2.0, k + 1));
            E += term;
        }
        const double expected = lead * std::pow(a, ip + 1) / (2 * fact) * E;
        const double got = approximation_error_bound(p, 1, 1, 1, u, a, ip, 80);
        CHECK(got > 0);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
    double prev = approximation_error_bound(p, 1, 1, 1, 0.5, 0.5, 0, 64);
    for (int ip = 1; ip <= 30; ++ip) {
        const double cur = approximation_error_bound(p, 1, 1, 1, 0.5, 0.5, ip, 64);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-100);
}

TEST_CASE("property: the error bound dominates the true error") {
    const auto p = make_params(5.0, -6.0);
    struct Case {
        const char* rhs;
        double u;
        std::function<double(double)> truth;
    };
    const auto two_term_truth = [p](double x) {
        const auto rep = two_term_pantograph(p, 1.0, 1.0, 0.5, 60);
        return ward_sum(*rep.series, x);
    };
    const Case cases[] = {
        {"yu", 0.5, [p](double x) { return exp_st(p, 0.5, x).value; }},
        {"y", 1.0, [p](double x) { return exp_st(p, 1.0, x).value; }},
        {"2*yu", 2.0, [p](double x) { return exp_st(p, 2.0, 2 * x).value; }},
        {"y + yu", 0.5, two_term_truth},
    };
    for (const auto& c : cases) {
        for (int iters : {1, 2, 4, 6}) {
            ApproximationOptions opts;
            opts.a_dom = 0.8;
            opts.b = 2.0;
            const auto rep = successive_approximation(EquationSpec<double>{p, c.u, parse_expr(c.rhs), 1.0}, iters, 30, opts);
            REQUIRE(rep.error_bound);
            for (const auto& pt : rep.lattice) {
                const double truth = c.truth(pt.x);
                // Both sides are doubles, so allow their rounding on top of the bound.
                CHECK(std::abs(truth - pt.y) <= *rep.error_bound + 16 * kEps * std::max(1.0, std::abs(truth)));
            }
        }
    }
}

TEST_CASE("estimated rectangle bounds") {
    const auto b = estimate_bounds(parse_expr("2*y + 3*yu"), 1.0, 1.0, 1.0);
    CHECK(b.M == doctest::Approx(1.5 * 10));
    CHECK(b.L1 == doctest::Approx(1.5 * 2).epsilon(1e-6));
    CHECK(b.L2 == doctest::Approx(1.5 * 3).epsilon(1e-6));
    const auto only_y = estimate_bounds(parse_expr("y"), 0.0, 1.0, 1.0);
    CHECK(only_y.L2 == 0.0);
}
