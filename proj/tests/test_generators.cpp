#include <gtest/gtest.h>

#include "lect/lect.hpp"

using namespace lect;

namespace {

QuadricSpec spec(int family, double a, double b, double c)
{
    QuadricSpec s;
    s.family = family;
    s.alpha = a;
    s.beta = b;
    s.gamma = c;
    return s;
}

}  // namespace

TEST(Quadric, CornerAndCenterValues)
{
    const VoxelGrid g = gen_quadric(spec(1, 1, 1, 1));
    EXPECT_EQ(g.dims, (std::array<int, 3>{10, 10, 10}));
    EXPECT_DOUBLE_EQ(g.at(0, 0, 0), 3.0);
    EXPECT_DOUBLE_EQ(g.at(9, 9, 9), 3.0);
    EXPECT_NEAR(g.at(4, 4, 4), 3.0 / 81.0, 1e-15);
    EXPECT_DOUBLE_EQ(grid_coord(0, 10), -1.0);
    EXPECT_DOUBLE_EQ(grid_coord(9, 10), 1.0);
    EXPECT_DOUBLE_EQ(quadric_value(spec(3, 1, 1, 1), 1, 1, 1), -1.0);
    EXPECT_DOUBLE_EQ(quadric_value(spec(4, 1, 1, 1), 0.5, 0, 0), 0.0);
}

TEST(Quadric, FamilyDifferences)
{
    const QuadricSpec s1 = spec(1, 0.6, 0.7, 0.8);
    QuadricSpec s2 = s1;
    s2.family = 2;
    const VoxelGrid a = gen_quadric(s1), b = gen_quadric(s2);
    for (int k = 0; k < 10; ++k)
        for (int j = 0; j < 10; ++j)
            for (int i = 0; i < 10; ++i) {
                const double z = grid_coord(k, 10);
                EXPECT_NEAR(b.at(i, j, k) - a.at(i, j, k), -2 * 0.8 * z * z, 1e-14);
            }
}

TEST(Quadric, Validation)
{
    EXPECT_THROW(gen_quadric(spec(5, 1, 1, 1)), InputError);
    EXPECT_THROW(gen_quadric(spec(1, 0.4, 1, 1)), InputError);
    QuadricSpec s = spec(4, 1, 1, 1);
    s.delta = 0.7;
    EXPECT_THROW(gen_quadric(s), InputError);
    EXPECT_THROW(setup_noise(3), InputError);
    EXPECT_THROW(gen_field_suite(0, 1, 1), InputError);
}

TEST(FieldSuite, DeterministicAndOrdered)
{
    const auto a = gen_field_suite(3, 2, 42), b = gen_field_suite(3, 2, 42), c = gen_field_suite(3, 2, 43);
    ASSERT_EQ(a.size(), 12u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].family, int(i / 3) + 1);
        EXPECT_EQ(a[i].grid.values, b[i].grid.values);
        EXPECT_NE(a[i].grid.values, c[i].grid.values);
        for (double x : {a[i].spec.alpha, a[i].spec.beta, a[i].spec.gamma}) {
            EXPECT_GE(x, 0.5);
            EXPECT_LE(x, 1.0);
        }
    }
    // Field i depends only on the seed and its index.
    const auto more = gen_field_suite(5, 2, 42);
    EXPECT_EQ(more[0].grid.values, a[0].grid.values);
}

TEST(FieldSuite, SetupOneIsNoiseFree)
{
    for (const LabeledGrid& f : gen_field_suite(2, 1, 7)) {
        QuadricSpec clean = f.spec;
        clean.noise_sd = 0;
        EXPECT_EQ(f.grid.values, gen_quadric(clean).values);
    }
}

TEST(FieldSuite, SetupTwoNoiseLevel)
{
    double sum = 0, sum2 = 0;
    std::size_t n = 0;
    for (const LabeledGrid& f : gen_field_suite(10, 2, 42)) {
        QuadricSpec clean = f.spec;
        clean.noise_sd = 0;
        const VoxelGrid base = gen_quadric(clean);
        for (std::size_t i = 0; i < base.values.size(); ++i) {
            const double e = f.grid.values[i] - base.values[i];
            sum += e;
            sum2 += e * e;
            ++n;
        }
    }
    EXPECT_EQ(n, 40000u);
    const double mean = sum / double(n);
    const double sd = std::sqrt(sum2 / double(n) - mean * mean);
    EXPECT_NEAR(sd, 0.1, 0.005);
    EXPECT_NEAR(mean, 0.0, 0.005);
}

TEST(FieldSuite, GeneratedFieldsAreValid)
{
    for (const LabeledGrid& f : gen_field_suite(1, 2, 5)) {
        EXPECT_NO_THROW(validate_grid(f.grid));
        const PLField pl = voxel_to_pl(f.grid);
        EXPECT_NO_THROW(validate_field(pl));
        EXPECT_EQ(euler_characteristic(pl.complex), 1);
    }
    const VoxelGrid g1 = gen_quadric(spec(1, 1, 1, 1)), g3 = gen_quadric(spec(3, 1, 1, 1));
    const auto [lo, hi] = global_range({&g1, &g3});
    EXPECT_DOUBLE_EQ(lo, 1.0 / 81.0 - 2.0);
    EXPECT_DOUBLE_EQ(hi, 3.0);
}

TEST(Generators, RingSliceTopology)
{
    // Family 4 on the z = 0 plane: (r - delta)^2.
    const QuadricSpec s = spec(4, 1, 1, 1);
    VoxelGrid g;
    const int n = 81;
    g.dims = {n, n, 1};
    g.origin = {-1, -1, 0};
    g.spacing = {2.0 / (n - 1), 2.0 / (n - 1), 1};
    g.values.resize(g.size());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g.at(i, j, 0) = quadric_value(s, grid_coord(i, n), grid_coord(j, n), 0);
    const PLField f = voxel_to_pl(g);
    // Level set: two circles. Superlevel set: inner disc plus square minus outer disc.
    EXPECT_EQ(euler_characteristic(level_restrict(f, 0.04).complex), 0);
    EXPECT_EQ(euler_characteristic(superlevel_restrict(f, 0.04).complex), 1);
}

TEST(Generators, PointCloudField)
{
    const PLField one = gen_point_cloud_field({{0.1, 0.2, 0}}, 2, 0.5, 31);
    const double mx = *std::max_element(one.values.begin(), one.values.end());
    EXPECT_LE(mx, 0.5);
    EXPECT_GT(mx, 0.45);
    for (double t : {0.05, 0.25, 0.45}) EXPECT_EQ(euler_characteristic(superlevel_restrict(one, t).complex), 1);
    EXPECT_EQ(euler_characteristic(gen_point_cloud_field({{0, 0, 0}}, 3, 0.5, 9).complex), 1);
    EXPECT_THROW(gen_point_cloud_field({}, 2, 0.5, 5), InputError);
    EXPECT_THROW(gen_point_cloud_field({{0, 0, 0}}, 2, 0.0, 5), InputError);
}

TEST(Generators, GlyphIsBoundedAndAsymmetric)
{
    const VoxelGrid g = gen_glyph_2d(41);
    for (double v : g.values) {
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    const VoxelGrid r = gen_glyph_2d(41, std::numbers::pi / 2);
    EXPECT_NE(g.values, r.values);
    // Mirror image differs from the original.
    double diff = 0;
    for (int j = 0; j < 41; ++j)
        for (int i = 0; i < 41; ++i) diff += std::abs(g.at(i, j, 0) - g.at(40 - i, j, 0));
    EXPECT_GT(diff, 1.0);
}
