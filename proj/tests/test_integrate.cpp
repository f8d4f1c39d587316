#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hybrid4/experiments.hpp"
#include "hybrid4/rulesearch.hpp"
#include "oracle.hpp"

using namespace hybrid4;

namespace {

double power_integral(int k) { return k % 2 ? 0.0 : 2.0 / (k + 1); }

double box_monomial(int r, int s, int t, int v)
{
    return 1.0 / ((r + 1.0) * (s + 1.0) * (t + 1.0) * (v + 1.0));
}

Integrand monomial(int r, int s, int t, int v)
{
    return [=](const Point4& x) {
        return std::pow(x[0], r) * std::pow(x[1], s) * std::pow(x[2], t) * std::pow(x[3], v);
    };
}

QuadratureRule rule_of(int p) { return load_shipped_rule(HYBRID4_RULES_DIR, p); }

} // namespace

TEST(ReferenceRules, TesseractTensorGauss)
{
    const auto r = tesseract_rule(3);
    EXPECT_EQ(r.points.size(), 81u);
    EXPECT_NEAR(r.weight_sum(), 16.0, 1e-13);
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; b += 2)
            EXPECT_NEAR(r.apply(monomial(a, b, 2, 4)),
                        power_integral(a) * power_integral(b) * power_integral(2) * power_integral(4), 1e-14);
}

TEST(ReferenceRules, SimplexConicalProduct)
{
    const auto r = simplex_rule(4);
    EXPECT_NEAR(r.weight_sum(), 1.0 / 24.0, 1e-16);
    // Barycentric coordinates lie in the open unit simplex.
    for (const auto& l : r.points) {
        EXPECT_GT(std::min({l[0], l[1], l[2], l[3]}), 0.0);
        EXPECT_LT(l[0] + l[1] + l[2] + l[3], 1.0);
    }
    const std::vector<Point4> unit{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (auto [a, b, c, d] : {std::array{7, 0, 0, 0}, std::array{2, 3, 1, 1}, std::array{0, 0, 4, 3}}) {
        const auto f = monomial(a, b, c, d);
        EXPECT_NEAR(r.apply(f), oracle::simplex(unit, f, 6), 1e-15);
    }
}

TEST(AffineMaps, RecoverSimilarities)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto kind : all_element_kinds) {
        Matrix4 a;
        for (auto& v : a.a)
            v = u(rng);
        a(0, 0) += 3;
        a(1, 1) += 3;
        a(2, 2) += 3;
        a(3, 3) += 3;
        const Point4 b{u(rng), u(rng), u(rng), u(rng)};
        std::vector<Point4> pts;
        for (const auto& p : reference_vertices(kind))
            pts.push_back(a * p + b);
        const auto m = affine_map_from_reference(kind, pts);
        EXPECT_NEAR(m.jacobian(), std::abs(determinant(a)), 1e-12);
        for (std::size_t i = 0; i < pts.size(); ++i)
            EXPECT_LT(distance(m(reference_vertices(kind)[i]), pts[i]), 1e-12);
    }
    // A non-affine vertex set is rejected.
    std::vector<Point4> bent(reference_cubic_pyramid().begin(), reference_cubic_pyramid().end());
    bent[5][0] += 0.3;
    EXPECT_THROW(affine_map_from_reference(ElementKind::CubicPyramid, bent), Error);
}

TEST(AffineMaps, MappedRuleOnRefinedPyramid)
{
    VertexPool pool;
    Element k;
    k.kind = ElementKind::CubicPyramid;
    for (std::size_t i = 0; i < 9; ++i)
        k.v[i] = pool.insert(reference_cubic_pyramid()[i]);
    const auto rule = rule_of(5);
    const auto f = monomial(2, 0, 2, 1);
    double total = 0.0;
    for (const auto& c : subdivide_D(k, pool)) {
        if (c.kind != ElementKind::CubicPyramid)
            continue;
        const auto mapped = map_rule_to_element(rule, c, pool.points());
        EXPECT_NEAR(mapped.weight_sum(), 0.125, 1e-15);
        total += mapped.apply(f);
    }
    EXPECT_TRUE(std::isfinite(total));

    Element t;
    t.kind = ElementKind::Tesseract;
    try {
        map_rule_to_element(rule, t, pool.points());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::KindMismatch);
    }
}

TEST(MeshIntegration, PolynomialsAreExactOnPyramidMeshes)
{
    const Mesh m = pyramid_mesh(2);
    for (int p : {2, 3, 5}) {
        const auto rule = rule_of(p);
        for (auto [a, b, c, d] : {std::array{0, 0, 0, 0}, std::array{1, 0, 0, 0}, std::array{0, 1, 1, 0},
                                  std::array{0, 0, 0, 2}, std::array{1, 0, 1, 1}}) {
            if (a + b + c + d > p)
                continue;
            EXPECT_NEAR(integrate_mesh(m, rule, monomial(a, b, c, d)), box_monomial(a, b, c, d), 1e-14)
                << p << ' ' << a << b << c << d;
        }
    }
}

TEST(MeshIntegration, HybridMeshNeedsSimplexRule)
{
    const Mesh m = refine_H(hybridize(mesh_canonical_box(2), [](const Point4& c) { return c[0] < 0.5; }));
    const auto rule = rule_of(4);
    try {
        integrate_mesh(m, rule, monomial(0, 0, 0, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedElementKind);
    }
    IntegrationOptions opts;
    opts.simplex_points = 3;
    EXPECT_NEAR(integrate_mesh(m, rule, monomial(0, 0, 0, 0), opts), 1.0, 1e-13);
    EXPECT_NEAR(integrate_mesh(m, rule, monomial(2, 0, 1, 1), opts), box_monomial(2, 0, 1, 1), 1e-14);
}

TEST(MeshIntegration, ThreadCountDoesNotChangeTheResult)
{
    const Mesh m = pyramid_mesh(3);
    const auto rule = rule_of(4);
    const auto f = integrand(TestFunction::F2);
    const double one = integrate_mesh(m, rule, f, {.threads = 1});
    EXPECT_EQ(integrate_mesh(m, rule, f, {.threads = 3}), one);
    EXPECT_EQ(integrate_mesh(m, rule, f, {.threads = 7}), one);
}

TEST(MeshIntegration, PairwiseSumIsOrderStable)
{
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 1.0 / static_cast<double>(i + 1);
    double naive = 0.0;
    for (double x : v)
        naive += x;
    EXPECT_NEAR(pairwise_sum(v), naive, 1e-12);
    EXPECT_EQ(pairwise_sum(std::span<const double>()), 0.0);
}

TEST(ConicalProduct, ExactToItsStrength)
{
    for (int p = 0; p <= 9; ++p) {
        const auto r = conical_product_rule(p);
        const int n = std::max(1, (p + 2) / 2);
        EXPECT_EQ(r.size(), static_cast<std::size_t>(n * n * n * n));
        const auto rep = verify_strength(r, p);
        EXPECT_TRUE(rep.pass) << p << ' ' << rep.max_residual;
        for (const auto& x : r.points())
            EXPECT_TRUE(strictly_inside_pyramid(x));
        // Against the oracle rather than the basis.
        const auto f = p >= 2 ? monomial(0, 2, 0, p - 2) : monomial(0, 0, 0, p);
        EXPECT_NEAR(integrate_reference(r, f), oracle::pyramid(f, 8), 1e-13) << p;
    }
}
