#include <cmath>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "hybrid4/rulesearch.hpp"
#include "oracle.hpp"

using namespace hybrid4;

namespace {

// The published N = 29 rule of strength 5, digits as printed.
const char* published_p5 = R"(strength 5
S1 -0.32846339581882957902277574789024 0.084184481885656624083314191434215
S2 0.59942266549153142521578075246447 -0.74912930534502345701037962143888 0.11340384654119720346152792514806
S2 0.76070275297226284532398968584027 -0.95754362470717092670167055158225 0.089004419809134534555110633350815
S3 0.43384835705078179649267535015814 -0.5766200661792940506119682920933 0.033983660519520996993103370708523
S3 0.69719510426558290268820473081072 -0.91852788682445245487884982935091 0.05368707948202312148400343648805
)";

SymmetryOrbit orbit(OrbitType t, std::vector<double> params, double w = 1.0) { return {t, std::move(params), w}; }

SymmetryOrbit random_orbit(OrbitType t, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const double delta = -u(rng);
    std::vector<double> p;
    for (int i = 0; i + 1 < orbit_param_count(t); ++i)
        p.push_back(-delta * u(rng));
    p.push_back(delta);
    return orbit(t, p);
}

double monomial(const Point4& x, int r, int s, int t, int v)
{
    return std::pow(x[0], r) * std::pow(x[1], s) * std::pow(x[2], t) * std::pow(x[3], v);
}

} // namespace

TEST(Orbits, SizesAndGenerators)
{
    std::mt19937_64 rng(5);
    for (auto t : all_orbit_types) {
        const auto o = random_orbit(t, rng);
        const auto pts = expand_orbit(o);
        EXPECT_EQ(static_cast<int>(pts.size()), orbit_size(t)) << orbit_name(t);
        for (const auto& p : pts) {
            EXPECT_EQ(p[3], o.delta());
            EXPECT_TRUE(strictly_inside_pyramid(p));
        }
    }
    const auto s2 = expand_orbit(orbit(OrbitType::S2, {0.25, -0.5}));
    const std::set<Point4, bool (*)(const Point4&, const Point4&)> got(
        s2.begin(), s2.end(), [](const Point4& a, const Point4& b) { return a.x < b.x; });
    for (int c = 0; c < 3; ++c)
        for (double s : {-0.25, 0.25}) {
            Point4 p{0, 0, 0, -0.5};
            p[static_cast<std::size_t>(c)] = s;
            EXPECT_TRUE(got.count(p));
        }
}

TEST(Orbits, ConstraintsAreStrict)
{
    for (const auto& o : {orbit(OrbitType::S1, {0.0}), orbit(OrbitType::S1, {-1.0}),
                          orbit(OrbitType::S2, {0.5, -0.5}), orbit(OrbitType::S3, {0.0, -0.5}),
                          orbit(OrbitType::S5, {0.2, 0.6, -0.5}), orbit(OrbitType::S7, {0.1, 0.2, -0.5})}) {
        try {
            check_orbit(o);
            FAIL() << orbit_name(o.type);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ConstraintViolation);
        }
    }
    EXPECT_FALSE(strictly_inside_pyramid({0, 0, 0, -1}));
    EXPECT_FALSE(strictly_inside_pyramid({0, 0, 0, 0}));
    EXPECT_FALSE(strictly_inside_pyramid({0.5, 0, 0, -0.5}));
    EXPECT_TRUE(strictly_inside_pyramid({0.49, -0.49, 0.49, -0.5}));
}

TEST(Moments, MonomialIntegralsMatchOracle)
{
    for (int r = 0; r <= 4; ++r)
        for (int s = 0; s + r <= 4; ++s)
            for (int t = 0; t + s + r <= 4; ++t)
                for (int v = 0; v + t + s + r <= 6; ++v) {
                    const double o = oracle::pyramid([&](const Point4& x) { return monomial(x, r, s, t, v); }, 8);
                    EXPECT_NEAR(pyramid_monomial_integral(r, s, t, v), o, 1e-13) << r << s << t << v;
                }
    // Volume 2, first x4 moment -8/5, so the centroid sits at x4 = -4/5.
    EXPECT_DOUBLE_EQ(pyramid_monomial_integral(0, 0, 0, 0), 2.0);
    EXPECT_DOUBLE_EQ(pyramid_monomial_integral(0, 0, 0, 1), -8.0 / 5.0);
    EXPECT_DOUBLE_EQ(pyramid_monomial_integral(0, 0, 0, 1) / pyramid_monomial_integral(0, 0, 0, 0), -0.8);
}

TEST(Moments, SymmetricEquationCounts)
{
    const std::vector<int> expected{4, 6, 10, 14, 21, 28, 39, 50, 66, 82, 105};
    for (int p = 2; p <= 12; ++p)
        EXPECT_EQ(symmetric_equation_count(p), expected[static_cast<std::size_t>(p - 2)]) << p;
}

TEST(Moments, SymmetricCountEqualsRankOfOrbitSums)
{
    // Independent of the mode selection: the rank of the orbit-sum matrix
    // over all modes, for many random orbits, is the number of independent
    // symmetric moment equations.
    std::mt19937_64 rng(17);
    for (int p = 2; p <= 7; ++p) {
        const auto modes = enumerate_modes(p);
        const int cols = 4 * symmetric_equation_count(p);
        Eigen::MatrixXd a(static_cast<Eigen::Index>(modes.size()), cols);
        PyramidBasis<double> basis(p);
        for (int c = 0; c < cols; ++c) {
            const auto o = random_orbit(all_orbit_types[static_cast<std::size_t>(c % 7)], rng);
            Eigen::VectorXd col = Eigen::VectorXd::Zero(a.rows());
            for (const auto& x : expand_orbit(o)) {
                basis.set_point(x);
                for (std::size_t m = 0; m < modes.size(); ++m)
                    col[static_cast<Eigen::Index>(m)] += basis(modes[m]);
            }
            a.col(c) = col;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-10);
        EXPECT_EQ(lu.rank(), symmetric_equation_count(p)) << p;
    }
}

TEST(RuleFiles, RoundTripIsExact)
{
    const auto rule = load_rule(published_p5);
    const auto again = load_rule(save_rule(rule));
    ASSERT_EQ(again.size(), rule.size());
    EXPECT_EQ(again.strength(), 5);
    for (std::size_t n = 0; n < rule.size(); ++n) {
        EXPECT_EQ(again.points()[n], rule.points()[n]);
        EXPECT_EQ(again.weights()[n], rule.weights()[n]);
    }
}

TEST(RuleFiles, MalformedInputThrows)
{
    const std::vector<std::pair<const char*, ErrorCode>> cases{
        {"", ErrorCode::ParseError},
        {"S1 -0.5 1\n", ErrorCode::ParseError},
        {"strength 2\n", ErrorCode::ParseError},
        {"strength 2\nS8 -0.5 1\n", ErrorCode::ParseError},
        {"strength 2\nS2 -0.5 1\n", ErrorCode::ParseError},
        {"strength 2\nS1 -0.5x 1\n", ErrorCode::ParseError},
        {"strength 2\nstrength 3\nS1 -0.5 2\n", ErrorCode::ParseError},
        {"strength 2\nS1 -1.5 2\n", ErrorCode::ConstraintViolation},
        {"strength 2\nS2 0.6 -0.5 2\n", ErrorCode::ConstraintViolation},
        {"strength 2\nS1 -0.5 -2\n", ErrorCode::ConstraintViolation},
    };
    for (const auto& [text, code] : cases) {
        try {
            load_rule(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), code) << text;
        }
    }
    const auto r = load_rule("# comment\n\nstrength 1\nS1 -0.8 2\n");
    EXPECT_EQ(r.size(), 1u);
}

TEST(PublishedRule, HasStrengthFive)
{
    const auto rule = load_rule(published_p5);
    EXPECT_EQ(rule.size(), 29u);
    EXPECT_NEAR(rule.weight_sum(), 2.0, 1e-15);
    for (std::size_t n = 0; n < rule.size(); ++n) {
        EXPECT_TRUE(strictly_inside_pyramid(rule.points()[n]));
        EXPECT_GT(rule.weights()[n], 0.0);
    }
    const auto r5 = verify_strength(rule, 5);
    EXPECT_TRUE(r5.pass) << r5.max_residual;
    EXPECT_LT(r5.max_residual, 1e-14);
    const auto r6 = verify_strength(rule, 6);
    EXPECT_FALSE(r6.pass);
    EXPECT_GT(r6.max_residual, 1e-4);
}

TEST(PublishedRule, IntegratesMonomialsAgainstOracle)
{
    const auto rule = load_rule(published_p5);
    double worst5 = 0.0, worst6 = 0.0;
    for (int r = 0; r <= 6; ++r)
        for (int s = 0; s + r <= 6; ++s)
            for (int t = 0; t + s + r <= 6; ++t)
                for (int v = 0; v + t + s + r <= 6; ++v) {
                    auto f = [&](const Point4& x) { return monomial(x, r, s, t, v); };
                    const double e = std::abs(integrate_reference(rule, f) - oracle::pyramid(f, 6));
                    (r + s + t + v <= 5 ? worst5 : worst6) = std::max(r + s + t + v <= 5 ? worst5 : worst6, e);
                }
    EXPECT_LT(worst5, 1e-13);
    EXPECT_GT(worst6, 1e-6);
}

TEST(PublishedRule, WeightsFollowFromAbscissae)
{
    const auto rule = load_rule(published_p5);
    const auto sol = solve_weights(rule.orbits(), 5);
    ASSERT_EQ(sol.weights.size(), rule.orbits().size());
    EXPECT_FALSE(sol.rank_deficient);
    EXPECT_LT(sol.residual, 1e-13);
    for (std::size_t o = 0; o < sol.weights.size(); ++o)
        EXPECT_NEAR(sol.weights[o], rule.orbits()[o].weight, 1e-10);
}

TEST(Rules, RejectNonPositiveWeightsAndEmpty)
{
    EXPECT_THROW(QuadratureRule(1, {}), Error);
    EXPECT_THROW(QuadratureRule(1, {orbit(OrbitType::S1, {-0.5}, 0.0)}), Error);
    const QuadratureRule one(1, {orbit(OrbitType::S1, {-0.8}, 2.0)});
    EXPECT_TRUE(verify_strength(one, 1).pass);
    EXPECT_FALSE(verify_strength(one, 2).pass);
}
