#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "pia/curves.hpp"

using namespace pia;

namespace {

std::vector<const RevenueCurve*> all(const std::vector<std::unique_ptr<RevenueCurve>>& owned) {
    std::vector<const RevenueCurve*> out;
    for (const auto& c : owned) out.push_back(c.get());
    return out;
}

std::vector<std::unique_ptr<RevenueCurve>> curve_matrix() {
    std::vector<std::unique_ptr<RevenueCurve>> cs;
    cs.push_back(std::make_unique<UniformCurve>(0.0, 1.0));
    cs.push_back(std::make_unique<ExponentialCurve>(1.0));
    cs.push_back(std::make_unique<TriangleCurve>(0.3, 1.0));
    cs.push_back(std::make_unique<TruncatedEqualRevenueCurve>(1.0, 10.0));
    cs.push_back(std::make_unique<PiecewiseLinearCurve>(std::vector<PiecewiseLinearCurve::Knot>{
        {0.0, 0.0}, {0.2, 0.8}, {0.5, 1.0}, {0.8, 0.6}, {1.0, 0.0}}));
    return cs;
}

} // namespace

TEST_CASE("value_at examples") {
    CHECK(UniformCurve(0.0, 1.0).value_at(0.25) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(TriangleCurve(0.5, 1.0).value_at(0.3) == 2.0);
    CHECK(UniformCurve(0.0, 1.0).value_at(1.0) == 0.0);
    CHECK(TriangleCurve(0.5, 1.0).value_at(1.0) == 0.0);
    CHECK(ExponentialCurve(1.0).value_at(0.0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(UniformCurve(0.0, 1.0).value_at(1.5), std::invalid_argument);
}

TEST_CASE("quantile_of examples") {
    CHECK(UniformCurve(0.0, 1.0).quantile_of(0.3) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(TriangleCurve(0.5, 1.0).quantile_of(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (const auto& c : curve_matrix()) CHECK(c->quantile_of(0.0) == 1.0);
    CHECK_THROWS_AS(UniformCurve(0.0, 1.0).quantile_of(-1.0), std::invalid_argument);
}

TEST_CASE("slope_at examples") {
    CHECK(UniformCurve(0.0, 1.0).slope_at(0.25, Side::Right) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ExponentialCurve(1.0).slope_at(std::exp(-1.0), Side::Left) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(TriangleCurve(0.5, 1.0).slope_at(0.7, Side::Left) == doctest::Approx(-2.0));
    CHECK(TriangleCurve(0.5, 1.0).slope_at(0.7, Side::Right) == doctest::Approx(-2.0));
    // one-sided slopes at the kink
    CHECK(TriangleCurve(0.5, 1.0).slope_at(0.5, Side::Left) == doctest::Approx(2.0));
    CHECK(TriangleCurve(0.5, 1.0).slope_at(0.5, Side::Right) == doctest::Approx(-2.0));
}

TEST_CASE("monopoly point examples") {
    const auto t = TriangleCurve(0.3, 2.0).monopoly();
    CHECK(t.q_star == 0.3);
    CHECK(t.value == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
    CHECK(t.revenue == 2.0);

    const auto u = UniformCurve(0.0, 1.0).monopoly();
    CHECK(u.q_star == 0.5);
    CHECK(u.value == 0.5);
    CHECK(u.revenue == 0.25);

    const auto e = ExponentialCurve(1.0).monopoly();
    CHECK(e.q_star == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(e.value == 1.0);
    CHECK(e.revenue == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    // smallest maximizing quantile wins ties: the equal-revenue plateau starts
    // at the atom
    const auto z = TruncatedEqualRevenueCurve(1.0, 10.0).monopoly();
    CHECK(z.q_star == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(z.value == 10.0);
    CHECK(z.revenue == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("sampling and posted prices") {
    CHECK(UniformCurve(0.0, 1.0).sample_value(0.4) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(TriangleCurve(0.5, 1.0).sample_value(0.25) == 2.0);
    CHECK(TriangleCurve(0.5, 1.0).sample_value(1.0) == 0.0);

    CHECK(UniformCurve(0.0, 1.0).posting_revenue(0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(TriangleCurve(0.5, 1.0).posting_revenue(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(UniformCurve(0.0, 1.0).posting_revenue(2.0) == 0.0);
    // monopoly price attains R* on every family
    for (const auto& c : curve_matrix()) {
        const auto m = c->monopoly();
        CHECK(c->posting_revenue(m.value) == doctest::Approx(m.revenue).epsilon(1e-12));
    }
}

TEST_CASE("concavity check") {
    CHECK(check_concavity(TriangleCurve(0.5, 1.0), 1001).empty());
    CHECK(check_concavity(ExponentialCurve(1.0), 1001).empty());
    for (const auto& c : curve_matrix()) CHECK(check_concavity(*c, 1001).empty());
    // slope increases after the drop: not concave
    const PiecewiseLinearCurve bad({{0.0, 0.0}, {0.5, 1.0}, {0.6, 0.2}, {1.0, 0.0}});
    CHECK_FALSE(check_concavity(bad, 1001).empty());
}

TEST_CASE("piecewise-linear curves reject invalid knots by index") {
    using Knots = std::vector<PiecewiseLinearCurve::Knot>;
    CHECK_THROWS_WITH_AS(PiecewiseLinearCurve(Knots{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.1}}),
                         doctest::Contains("knot 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(PiecewiseLinearCurve(Knots{{0.0, 0.0}, {0.5, 1.0}, {0.4, 0.5}, {1.0, 0.0}}),
                         doctest::Contains("knot 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate_concave_knots(Knots{{0.0, 0.0}, {0.5, 1.0}, {0.6, 0.2}, {1.0, 0.0}}),
                         doctest::Contains("knot 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(PiecewiseLinearCurve(Knots{{0.0, 0.0}, {0.5, -1.0}, {1.0, 0.0}}),
                         doctest::Contains("knot 1"), std::invalid_argument);
}

TEST_CASE("constructor contracts") {
    CHECK_THROWS_AS(TriangleCurve(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TriangleCurve(1.0, 1.0), std::invalid_argument); // R(1) would be R* > 0
    CHECK_THROWS_AS(UniformCurve(0.5, 1.0), std::invalid_argument);  // R(1) would be 0.5
    CHECK_THROWS_AS(ExponentialCurve(0.0), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedEqualRevenueCurve(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("round trip: quantile_of inverts value_at on continuous families") {
    const UniformCurve u(0.0, 1.0);
    const ExponentialCurve e(1.0);
    for (int i = 1; i < 200; ++i) {
        const double q = i / 200.0;
        CHECK(u.quantile_of(u.value_at(q)) == doctest::Approx(q).epsilon(1e-10));
        CHECK(e.quantile_of(e.value_at(q)) == doctest::Approx(q).epsilon(1e-10));
    }
}

TEST_CASE("scaling revenues by c scales values and leaves quantiles put") {
    const double c = 7.0;
    for (const auto& base : curve_matrix()) {
        const auto scaled = base->scaled(c);
        const auto m0 = base->monopoly();
        const auto m1 = scaled->monopoly();
        CHECK(m1.q_star == doctest::Approx(m0.q_star).epsilon(1e-12));
        CHECK(m1.revenue == doctest::Approx(c * m0.revenue).epsilon(1e-12));
        CHECK(m1.value == doctest::Approx(c * m0.value).epsilon(1e-12));
        for (int i = 1; i <= 20; ++i) {
            const double q = i / 21.0;
            CHECK(scaled->value_at(q) == doctest::Approx(c * base->value_at(q)).epsilon(1e-12));
            CHECK(scaled->posting_revenue(c * base->value_at(q)) ==
                  doctest::Approx(c * base->posting_revenue(base->value_at(q))).epsilon(1e-12));
            CHECK(scaled->quantile_of(c * base->value_at(q)) ==
                  doctest::Approx(base->quantile_of(base->value_at(q))).epsilon(1e-12));
        }
    }
}

TEST_CASE("monotonicity of value, quantile and slope maps") {
    for (const auto& c : curve_matrix()) {
        double prev_v = std::numeric_limits<double>::infinity();
        double prev_s = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 400; ++i) {
            const double q = i / 401.0;
            const double v = c->value_at(q);
            CHECK(v <= prev_v + 1e-12);
            prev_v = v;
            const double s = c->slope_at(q, Side::Right);
            CHECK(s <= prev_s + 1e-12);
            prev_s = s;
        }
        double prev_q = 1.0;
        const double top = c->bounded() ? c->top_value() : 5.0;
        for (int i = 0; i <= 400; ++i) {
            const double p = top * i / 400.0;
            const double q = c->quantile_of(p);
            CHECK(q <= prev_q + 1e-12);
            prev_q = q;
        }
        // monopoly maximizes revenue over a grid
        const auto m = c->monopoly();
        for (int i = 0; i <= 400; ++i)
            CHECK(c->revenue_at(i / 400.0) <= m.revenue + 1e-12);
        // endpoints vanish
        CHECK(c->revenue_at(0.0) == 0.0);
        CHECK(std::abs(c->revenue_at(1.0)) < 1e-15);
    }
}

TEST_CASE("triangle right-branch inverse is the stretch-bound closed form") {
    // For q~ >= q* the quantile of v(q~)/(1+d) equals (1+d)q~/(1+d q~) exactly.
    for (double qs : {0.1, 0.3, 0.5}) {
        const TriangleCurve t(qs, 1.0);
        for (double delta : {0.25, 1.0, 3.0}) {
            for (int i = 0; i <= 50; ++i) {
                const double qt = qs + (1.0 - qs) * i / 50.0;
                if (qt <= 0.0 || qt >= 1.0) continue;
                const double lhs = t.quantile_of(t.value_at(qt) / (1.0 + delta));
                const double rhs = (1.0 + delta) * qt / (1.0 + delta * qt);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("truncated equal-revenue geometry") {
    const TruncatedEqualRevenueCurve c(1.0, 10.0, 0.25);
    CHECK(c.revenue_at(0.075) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c.revenue_at(0.4) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c.revenue_at(0.75) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c.value_at(0.05) == 10.0);
    CHECK(c.value_at(0.75) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.quantile_of(10.0) == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(c.quantile_of(1.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c.quantile_of(0.5) == doctest::Approx(1.0 - 0.125).epsilon(1e-12));
    CHECK(c.kinks().size() == 2);
}
