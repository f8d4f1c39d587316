#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hybrid4/experiments.hpp"
#include "hybrid4/rulesearch.hpp"
#include "oracle.hpp"

using namespace hybrid4;

namespace {

/// Number of ways to write n as a sum of orbit sizes, by direct recursion.
long count_partitions(int n, std::size_t type = 0)
{
    if (n == 0)
        return 1;
    if (type == 7 || n < 0)
        return 0;
    long total = 0;
    const int size = orbit_size(all_orbit_types[type]);
    for (int k = 0; k * size <= n; ++k)
        total += count_partitions(n - k * size, type + 1);
    return total;
}

SearchConfig quick(int p, int lo, int hi)
{
    SearchConfig c;
    c.strength = p;
    c.min_points = lo;
    c.max_points = hi;
    c.seed = 1;
    c.restarts = 200;
    c.budget_seconds = 300.0;
    return c;
}

} // namespace

TEST(Decompositions, EnumerationIsComplete)
{
    for (int n = 1; n <= 60; ++n)
        EXPECT_EQ(static_cast<long>(enumerate_decompositions(n).size()), count_partitions(n)) << n;
    const auto seven = enumerate_decompositions(7);
    ASSERT_EQ(seven.size(), 2u);
    for (const auto& d : seven)
        EXPECT_EQ(d.points(), 7);
}

TEST(Decompositions, Bookkeeping)
{
    Decomposition d;
    d.counts = {1, 2, 2, 0, 0, 0, 0};
    EXPECT_EQ(d.points(), 29);
    EXPECT_EQ(d.dof(), 1 + 4 + 4);
    EXPECT_EQ(d.orbit_count(), 5);
    EXPECT_EQ(d.unknowns(), 14);
    EXPECT_EQ(d.to_string(), "S1x1+S2x2+S3x2");
    // Square for p = 5: 14 unknowns, 14 symmetric equations.
    EXPECT_EQ(symmetric_equation_count(5), 14);
}

TEST(Search, NoStrictRuleOfStrengthTwoBelowNine)
{
    // N <= 8 allows S1/S2 orbits only, or a single S3 orbit. The sum of the
    // three spatial quadratic modes, 3(|x|^2 - x4^2)/2, integrates to zero
    // over K* but is negative at every strictly interior S1 or S2 point, so
    // no positive weights satisfy its moment equation. A single orbit has one
    // x4 value, but the x4 marginal of K* has positive variance.
    auto g = [](const Point4& x) { return 1.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - x[3] * x[3]); };
    EXPECT_NEAR(oracle::pyramid(g, 6), 0.0, 1e-14);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double delta = -std::max(1e-9, u(rng));
        EXPECT_LT(g({0, 0, 0, delta}), 0.0);
        EXPECT_LT(g({-delta * u(rng), 0, 0, delta}), 0.0);
    }
    for (int n = 1; n <= 8; ++n)
        for (const auto& d : enumerate_decompositions(n))
            EXPECT_TRUE(d.counts[0] + d.counts[1] == d.orbit_count() || d.orbit_count() == 1) << d.to_string();
    const double mean = pyramid_monomial_integral(0, 0, 0, 1) / 2.0;
    EXPECT_GT(pyramid_monomial_integral(0, 0, 0, 2) / 2.0 - mean * mean, 0.02);

    const auto out = search(quick(2, 1, 9));
    ASSERT_FALSE(out.rules.empty());
    EXPECT_EQ(out.rules.front().size(), 9u);
}

TEST(Search, SevenPointsOfStrengthTwoNeedTheBoundary)
{
    // The apex plus one point on each lateral facet: exact to degree 2,
    // so seven points suffice once the closed pyramid is allowed.
    std::vector<std::pair<Point4, double>> rule{{{0, 0, 0, 0}, 2.0 / 25.0}};
    for (std::size_t c = 0; c < 3; ++c)
        for (double s : {-5.0 / 6.0, 5.0 / 6.0}) {
            Point4 x{0, 0, 0, -5.0 / 6.0};
            x[c] = s;
            rule.emplace_back(x, 8.0 / 25.0);
        }
    double worst2 = 0.0, worst3 = 0.0;
    for (int r = 0; r <= 3; ++r)
        for (int s = 0; s + r <= 3; ++s)
            for (int t = 0; t + s + r <= 3; ++t)
                for (int v = 0; v + t + s + r <= 3; ++v) {
                    double q = 0.0;
                    for (const auto& [x, w] : rule)
                        q += w * std::pow(x[0], r) * std::pow(x[1], s) * std::pow(x[2], t) * std::pow(x[3], v);
                    const double e = std::abs(q - pyramid_monomial_integral(r, s, t, v));
                    (r + s + t + v <= 2 ? worst2 : worst3) = std::max(r + s + t + v <= 2 ? worst2 : worst3, e);
                }
    EXPECT_LT(worst2, 1e-15);
    EXPECT_GT(worst3, 1e-2);
    EXPECT_FALSE(strictly_inside_pyramid(rule[0].first));
    EXPECT_FALSE(strictly_inside_pyramid(rule[1].first));
}

TEST(Search, StrengthThreeAtTen)
{
    const auto out = search(quick(3, 1, 10));
    ASSERT_FALSE(out.rules.empty());
    const auto& r = out.rules.front();
    EXPECT_EQ(r.size(), 10u);
    EXPECT_TRUE(verify_strength(r, 3, 1e-12).pass);
    for (std::size_t n = 0; n < r.size(); ++n) {
        EXPECT_TRUE(strictly_inside_pyramid(r.points()[n]));
        EXPECT_GT(r.weights()[n], 0.0);
    }
}

TEST(Search, DeterministicUnderAttemptCap)
{
    auto c = quick(4, 20, 22);
    c.max_attempts = 400;
    c.budget_seconds = 1e9;
    const auto a = search(c), b = search(c);
    ASSERT_EQ(a.log.size(), b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        EXPECT_EQ(a.log[i].decomposition, b.log[i].decomposition);
        EXPECT_EQ(a.log[i].residual, b.log[i].residual);
    }
    ASSERT_EQ(a.rules.size(), b.rules.size());
    for (std::size_t i = 0; i < a.rules.size(); ++i)
        EXPECT_EQ(save_rule(a.rules[i]), save_rule(b.rules[i]));
}

TEST(Search, RefineValidatesItsInput)
{
    Decomposition d;
    d.counts = {1, 0, 1, 0, 0, 0, 0};
    SearchConfig c;
    c.strength = 2;
    const std::vector<SymmetryOrbit> wrong{{OrbitType::S1, {-0.5}, 1.0}};
    EXPECT_THROW(refine_rule(d, wrong, c), Error);
    const std::vector<SymmetryOrbit> swapped{{OrbitType::S3, {0.2, -0.5}, 1.0}, {OrbitType::S1, {-0.5}, 1.0}};
    EXPECT_THROW(refine_rule(d, swapped, c), Error);
}

TEST(Search, InitialGuessesAreInterior)
{
    std::mt19937_64 rng(9);
    for (int n : {22, 29, 51})
        for (const auto& d : enumerate_decompositions(n))
            for (int r : {0, 1, 2}) {
                const auto g = initial_guess(d, r, rng);
                ASSERT_EQ(g.size(), static_cast<std::size_t>(d.orbit_count()));
                for (const auto& o : g)
                    EXPECT_NO_THROW(check_orbit(o));
            }
}

TEST(Search, WeightsSolveForExactAbscissae)
{
    const auto rule = load_rule_file(std::filesystem::path(HYBRID4_RULES_DIR) / "p04.txt");
    const auto sol = solve_weights(rule.orbits(), 4);
    EXPECT_LT(sol.residual, 1e-13);
    ASSERT_FALSE(sol.rank_deficient);
    for (std::size_t o = 0; o < sol.weights.size(); ++o)
        EXPECT_NEAR(sol.weights[o], rule.orbits()[o].weight, 1e-10);
}
