#include <gtest/gtest.h>

#include <set>

#include "lect/lect.hpp"
#include "oracles.hpp"

using namespace lect;

namespace {

Complex tetra_boundary()
{
    Complex k;
    k.dim = 3;
    k.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    k.simplices = close_simplices({Simplex{0, 1, 2}, Simplex{0, 1, 3}, Simplex{0, 2, 3}, Simplex{1, 2, 3}});
    return k;
}

ScanRequest request(int dim, int nd, std::vector<double> heights, std::vector<double> thresholds)
{
    ScanRequest r;
    r.directions = make_directions(dim, nd);
    r.heights = std::move(heights);
    r.thresholds = std::move(thresholds);
    return r;
}

/// Run-length collapse of a sampled curve.
std::vector<int> distinct_runs(const std::vector<int>& v)
{
    std::vector<int> out;
    for (int x : v)
        if (out.empty() || out.back() != x) out.push_back(x);
    return out;
}

PLField two_discs(int resolution)
{
    return gen_point_cloud_field({{-0.3, 0, 0}, {0.3, 0, 0}}, 2, 0.5, resolution);
}

}  // namespace

TEST(EctCurve, SinglePoint)
{
    Complex k;
    k.dim = 3;
    k.points = {{0.2, -0.4, 0.7}};
    k.simplices = {Simplex{0}};
    const Point v = make_directions(3, 5)[2];
    const EulerCurve c = ect_curve(k, v);
    ASSERT_EQ(c.jumps.size(), 1u);
    EXPECT_DOUBLE_EQ(c.jumps[0].first, dot(k.points[0], v));
    EXPECT_EQ(c.jumps[0].second, 1);
}

TEST(EctCurve, TetrahedronBoundary)
{
    const Complex k = tetra_boundary();
    for (const Point& v : make_directions(3, 20).directions) {
        const EulerCurve c = ect_curve(k, v);
        EXPECT_EQ(c.initial_value, 0);
        EXPECT_EQ(c.final_value(), 2);
        for (std::size_t i = 1; i < c.jumps.size(); ++i) EXPECT_LT(c.jumps[i - 1].first, c.jumps[i].first);
    }
}

TEST(EctCurve, MatchesHalfspaceClipOracle)
{
    Rng rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        const Complex k = oracle::random_complex(rng, 2);
        for (int d = 0; d < 20; ++d) {
            const double a = rng.uniform(0, 2 * std::numbers::pi);
            const Point v{std::cos(a), std::sin(a), 0};
            const EulerCurve c = ect_curve(k, v);
            for (int s = 0; s < 50; ++s) {
                const double h = rng.uniform(-1.5, 1.5);
                EXPECT_EQ(c.value_at(h), oracle::halfspace_chi(k, v, h));
            }
            // Exact vertex heights, where the closed half-space convention matters.
            for (const Point& p : k.points) EXPECT_EQ(c.value_at(dot(p, v)), oracle::halfspace_chi(k, v, dot(p, v)));
        }
    }
}

TEST(EctCurve, SampledAgreesWithEventsAndCounting)
{
    Rng rng(22);
    const std::vector<double> heights = linspace(-1.6, 1.6, 41);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex k = oracle::random_complex(rng, 3);
        for (const Point& v : make_directions(3, 10).directions) {
            const auto sampled = sample_ect(k, v, heights);
            const auto counted = oracle::ect_samples(k, v, heights);
            const auto events = ect_curve(k, v).sample(heights);
            for (std::size_t j = 0; j < heights.size(); ++j) {
                EXPECT_EQ(sampled[j], counted[j]);
                EXPECT_EQ(events[j], counted[j]);
            }
        }
    }
}

TEST(SelectTransform, ConstantFieldGivesEct)
{
    Rng rng(23);
    PLField f = oracle::jittered_field(rng, 4, 2);
    std::fill(f.values.begin(), f.values.end(), 1.0);
    const ScanRequest req = request(2, 8, linspace(-1.5, 1.5, 30), uniform_thresholds(5));
    const TransformGrid s = select_transform(f, req);
    const TransformGrid e = ect_transform(f.complex, req);
    for (std::size_t i = 0; i < s.num_directions(); ++i)
        for (std::size_t j = 0; j < s.num_heights(); ++j)
            for (std::size_t k = 0; k < s.num_thresholds(); ++k) EXPECT_EQ(s.at(i, j, k), e.at(i, j, 0));
}

TEST(SelectTransform, FullHeightSliceIsDirectionIndependent)
{
    Rng rng(24);
    const PLField f = oracle::jittered_field(rng, 4, 3);
    const double r = height_radius(f.points(), make_directions(3, 12));
    const ScanRequest req = request(3, 12, padded_heights(r, 20), uniform_thresholds(6));
    const TransformGrid g = select_transform(f, req);
    for (std::size_t k = 0; k < g.num_thresholds(); ++k) {
        const long long chi = euler_characteristic(superlevel_restrict(f, g.thresholds[k]).complex);
        for (std::size_t i = 0; i < g.num_directions(); ++i) {
            EXPECT_EQ(g.at(i, g.num_heights() - 1, k), chi);
            EXPECT_EQ(g.at(i, 0, k), 0);
        }
    }
}

TEST(SelectTransform, TwoDiscs)
{
    const PLField f = two_discs(121);
    const Point v{1, 0, 0};
    const std::vector<double> heights = linspace(-1.0, 1.0, 401);
    // Radius 0.25 < 0.3: two discs.
    EXPECT_EQ(euler_characteristic(superlevel_restrict(f, 0.25).complex), 2);
    EXPECT_EQ(distinct_runs(euler_scan(f, v, 0.25, heights)), (std::vector<int>{0, 1, 2}));
    // Radius 0.35 > 0.3: one merged component.
    EXPECT_EQ(euler_characteristic(superlevel_restrict(f, 0.15).complex), 1);
    EXPECT_EQ(distinct_runs(euler_scan(f, v, 0.15, heights)), (std::vector<int>{0, 1}));
    // Just below the peak: two small discs.
    EXPECT_EQ(euler_characteristic(superlevel_restrict(f, 0.45).complex), 2);
}

TEST(SelectTransform, ThreadCountDoesNotChangeOutput)
{
    Rng rng(25);
    const PLField f = oracle::jittered_field(rng, 5, 3);
    const ScanRequest req = request(3, 30, linspace(-2, 2, 25), uniform_thresholds(7));
    const TransformGrid a = select_transform(f, req, 1);
    const TransformGrid b = select_transform(f, req, 3);
    EXPECT_EQ(a.values, b.values);
}

TEST(SelectTransform, RequestValidation)
{
    const PLField f = two_discs(5);
    EXPECT_THROW(select_transform(f, request(2, 4, {}, {0.5})), InputError);
    EXPECT_THROW(select_transform(f, request(2, 4, {1, 0}, {0.5})), InputError);
    EXPECT_THROW(select_transform(f, request(2, 4, {0, 1}, {0.0, 0.5})), InputError);
    EXPECT_THROW(padded_heights(1.0, 1), InputError);
}

TEST(LectTransform, ConstantFieldSlices)
{
    Rng rng(26);
    PLField f = oracle::jittered_field(rng, 4, 2);
    std::fill(f.values.begin(), f.values.end(), 1.0);
    const ScanRequest req = request(2, 8, linspace(-1.5, 1.5, 30), {0.25, 0.5, 1.0});
    const TransformGrid l = lect_transform(f, req);
    const TransformGrid e = ect_transform(f.complex, req);
    for (std::size_t i = 0; i < l.num_directions(); ++i)
        for (std::size_t j = 0; j < l.num_heights(); ++j) {
            EXPECT_EQ(l.at(i, j, 0), 0);
            EXPECT_EQ(l.at(i, j, 1), 0);
            EXPECT_EQ(l.at(i, j, 2), e.at(i, j, 0));
        }
}

TEST(LectTransform, SegmentCrossing)
{
    const PLField f = make_closed_field(2, {{0, 0, 0}, {1, 0, 0}}, {0, 1}, {Simplex{0, 1}});
    const ScanRequest req = request(2, 4, {0.0, 0.49, 0.5, 0.51, 1.0}, {0.5});
    const TransformGrid g = lect_transform(f, req);
    EXPECT_EQ((std::vector<int>{g.at(0, 0, 0), g.at(0, 1, 0), g.at(0, 2, 0), g.at(0, 3, 0), g.at(0, 4, 0)}),
              (std::vector<int>{0, 0, 1, 1, 1}));
}

TEST(LectTransform, EllipsoidShell)
{
    QuadricSpec s;
    s.family = 1;
    VoxelGrid g = gen_quadric(s);
    for (double& v : g.values) v /= 3.0;
    const PLField f = voxel_to_pl(g);
    const DirectionSet dirs = make_directions(3, 40);
    const ClippedComplex shell = level_restrict(f, 0.25);
    EXPECT_EQ(euler_characteristic(shell.complex), 2);
    for (const Point& v : dirs.directions) EXPECT_EQ(ect_curve(shell.complex, v).final_value(), 2);
}

TEST(EulerScan, MatchesTransformSlices)
{
    Rng rng(27);
    const PLField f = oracle::jittered_field(rng, 4, 3);
    const ScanRequest req = request(3, 10, linspace(-2, 2, 33), uniform_thresholds(10));
    const TransformGrid g = select_transform(f, req);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t i = rng.below(10), k = rng.below(10);
        const auto curve = euler_scan(f, req.directions[i], req.thresholds[k], req.heights);
        for (std::size_t j = 0; j < req.heights.size(); ++j) EXPECT_EQ(curve[j], g.at(i, j, k));
    }
}

TEST(EulerScan, ConstantFieldIsSupportEct)
{
    Rng rng(28);
    PLField f = oracle::jittered_field(rng, 4, 2);
    std::fill(f.values.begin(), f.values.end(), 0.7);
    for (const Point& v : make_directions(2, 6).directions)
        for (double t : {0.1, 0.7}) EXPECT_EQ(euler_scan(f, v, t).jumps, ect_curve(f.complex, v).jumps);
    EXPECT_TRUE(euler_scan(f, Point{1, 0, 0}, 0.71).jumps.empty());
}

TEST(EulerScan, JumpsOnlyAtClippedVertexHeights)
{
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + trial % 2;
        const PLField f = oracle::jittered_field(rng, dim == 2 ? 5 : 3, dim);
        const double t = rng.uniform(0.1, 0.9);
        const ClippedComplex c = superlevel_restrict(f, t);
        for (const Point& v : make_directions(dim, 9).directions) {
            std::set<double> heights;
            for (std::size_t i = 0; i < c.points().size(); ++i) {
                const Provenance& p = c.provenance[i];
                const Point x = p.is_original() ? f.points()[p.a] : lerp(f.points()[p.a], f.points()[p.b], p.s);
                heights.insert(dot(x, v));
            }
            const EulerCurve curve = euler_scan(f, v, t);
            EXPECT_LE(curve.num_jumps(), c.points().size());
            for (const auto& [h, value] : curve.jumps) EXPECT_TRUE(heights.count(h)) << h;
        }
    }
}

TEST(SelectTransform, DistinctFieldsGiveDistinctGrids)
{
    Rng rng(30);
    const ScanRequest req = request(2, 16, linspace(-1.6, 1.6, 64), uniform_thresholds(32));
    for (int trial = 0; trial < 50; ++trial) {
        const PLField a = oracle::jittered_field(rng, 3, 2);
        PLField b = a;
        // Perturb one vertex value, or one vertex position.
        const std::size_t i = rng.below(b.num_vertices());
        if (trial % 2 == 0) b.values[i] = std::clamp(b.values[i] + (b.values[i] < 0.5 ? 0.3 : -0.3), 0.0, 1.0);
        else b.complex.points[i][0] += 0.4;
        EXPECT_NE(select_transform(a, req).values, select_transform(b, req).values) << "trial " << trial;
    }
}
