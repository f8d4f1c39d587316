#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hybrid4/experiments.hpp"
#include "oracle.hpp"

using namespace hybrid4;

namespace {

/// int_0^1 g(x) dx by the oracle's Gauss-Legendre on 8 panels.
template <class G>
double line_integral(G g)
{
    const auto r = oracle::legendre01(30);
    double s = 0.0;
    for (int panel = 0; panel < 8; ++panel)
        for (std::size_t i = 0; i < r.x.size(); ++i)
            s += r.w[i] / 8.0 * g((panel + r.x[i]) / 8.0);
    return s;
}

} // namespace

TEST(Fpoly, ExactIntegralMatchesOracle)
{
    for (int m = 0; m <= 12; ++m) {
        const double o = oracle::pyramid([m](const Point4& x) { return fpoly(x, m); }, 9);
        EXPECT_NEAR(fpoly_exact(m), o, 1e-12 * std::max(1.0, std::abs(o))) << m;
    }
    EXPECT_THROW(fpoly_exact(-1), Error);
}

TEST(Fpoly, CoefficientsAtOrigin)
{
    // Only the constant term survives at x = 0.
    for (int m = 0; m <= 6; ++m)
        EXPECT_NEAR(fpoly({0, 0, 0, 0}, m), fpoly_coefficient(0, 0, 0, 0, m), 1e-15);
    EXPECT_DOUBLE_EQ(fpoly_coefficient(0, 0, 0, 0, 0), 1.0);
}

TEST(Fpoly, ShippedRuleIsExactUpToItsStrength)
{
    const auto rule = load_shipped_rule(HYBRID4_RULES_DIR, 5);
    for (int m = 0; m <= 5; ++m)
        EXPECT_LE(cmd_fpoly(rule, m).error(), 1e-12) << m;
    EXPECT_GT(cmd_fpoly(rule, 6).error(), 1e-8);
}

TEST(TestFunctions, NamesAndValues)
{
    for (auto f : {TestFunction::F1, TestFunction::F2, TestFunction::F3, TestFunction::One})
        EXPECT_EQ(parse_function(function_name(f)), f);
    try {
        parse_function("f4");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownFunction);
    }
    const Point4 x{0.5, 0.25, 1.0, 0.0};
    EXPECT_NEAR(integrand(TestFunction::F1)(x), 0.0, 1e-15);
    EXPECT_NEAR(integrand(TestFunction::F2)(x), std::exp(0.25 + 0.0625 + 1.0), 1e-14);
    EXPECT_NEAR(integrand(TestFunction::F3)(x), std::exp(0.5 + 0.125 + 1.0 / 3.0), 1e-14);
}

TEST(Oracle, SeparableClosedForms)
{
    // The test functions factor into one-dimensional integrals.
    const double s1 = line_integral([](double x) { return std::sin(std::numbers::pi * x * x); });
    const double s2 = line_integral([](double x) { return std::exp(x * x); });
    const double f3 = f3_exact();
    EXPECT_NEAR(f3, line_integral([](double x) { return std::exp(x); }) *
                        line_integral([](double x) { return std::exp(x / 2); }) *
                        line_integral([](double x) { return std::exp(x / 3); }) *
                        line_integral([](double x) { return std::exp(x / 4); }),
                1e-14);

    const auto o1 = cmd_oracle(integrand(TestFunction::F1));
    const auto o2 = cmd_oracle(integrand(TestFunction::F2));
    const auto o3 = cmd_oracle(integrand(TestFunction::F3));
    EXPECT_NEAR(o1.value, std::pow(s1, 4), 1e-14);
    EXPECT_NEAR(o2.value, std::pow(s2, 4), 1e-13 * o2.value);
    EXPECT_NEAR(o3.value, f3, 1e-14 * f3);
    for (const auto& o : {o1, o2, o3})
        EXPECT_LE(o.disagreement(), 1e-13 * std::max(1.0, o.value));
}

TEST(Oracle, DisagreementIsReported)
{
    // Too few nodes for a rough integrand.
    const Integrand rough = [](const Point4& x) { return std::sin(40.0 * x[0]) * std::exp(x[1]); };
    try {
        cmd_oracle(rough, 1e-13, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OracleDisagreement);
    }
}

TEST(Convergence, RowsAndObservedOrder)
{
    const auto rule = load_shipped_rule(HYBRID4_RULES_DIR, 3);
    const double ref = f3_exact();
    const auto rows = cmd_convergence(integrand(TestFunction::F3), ref, rule, {1, 2, 4});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(std::isnan(rows[0].order));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].error, rows[i - 1].error);
        EXPECT_NEAR(rows[i].order, std::log(rows[i - 1].error / rows[i].error) / std::log(2.0), 1e-12);
        EXPECT_GT(rows[i].order, 3.5);
    }
    EXPECT_THROW(pyramid_mesh(0), Error);
}

TEST(RuleLookup, MissingRuleIsReported)
{
    try {
        load_shipped_rule(HYBRID4_RULES_DIR, 40);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownRule);
    }
    EXPECT_EQ(rule_path("rules", 7).filename(), "p07.txt");
}
