#ifndef LECT_GENERATORS_HPP
#define LECT_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "field.hpp"

namespace lect {

/// splitmix64 finaliser; used to derive per-object seeds from one run seed.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ (index * 0xd1342543de82ef95ULL + 1));
}

/**
 * Portable random source: std::mt19937_64 has a fully specified output
 * sequence, while the standard distributions do not, so uniforms and
 * Gaussians are derived here by hand (53-bit uniforms, Box-Muller normals).
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }
    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Parameters of one simulated quadric field.
struct QuadricSpec {
    int family = 1;  // 1..4
    double alpha = 1, beta = 1, gamma = 1;
    double delta = 0.5;  // ring radius, family 4 only
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
};

inline void validate(const QuadricSpec& s)
{
    if (s.family < 1 || s.family > 4) throw InputError("quadric family must be 1..4");
    for (double c : {s.alpha, s.beta, s.gamma})
        if (c < 0.5 || c > 1.0) throw InputError("quadric coefficients must lie in [0.5, 1]");
    if (s.family == 4 && (s.delta < 0.4 || s.delta > 0.6)) throw InputError("ring radius must lie in [0.4, 0.6]");
    if (s.noise_sd < 0) throw InputError("noise_sd must be non-negative");
}

inline double quadric_value(const QuadricSpec& s, double x, double y, double z)
{
    switch (s.family) {
    case 1: return s.alpha * x * x + s.beta * y * y + s.gamma * z * z;
    case 2: return s.alpha * x * x + s.beta * y * y - s.gamma * z * z;
    case 3: return s.alpha * x * x - s.beta * y * y - s.gamma * z * z;
    default: {
        const double r = std::sqrt(s.alpha * x * x + s.beta * y * y) - s.delta;
        return r * r + s.gamma * z * z;
    }
    }
}

/// Grid coordinate -1 + 2 i / (n - 1).
inline double grid_coord(int i, int n) { return -1.0 + 2.0 * double(i) / double(n - 1); }

/// Quadric family evaluated on the 10x10x10 grid over [-1, 1]^3, plus iid noise.
inline VoxelGrid gen_quadric(const QuadricSpec& s, int n = 10)
{
    validate(s);
    VoxelGrid g;
    g.dims = {n, n, n};
    g.origin = {-1, -1, -1};
    g.spacing = {2.0 / (n - 1), 2.0 / (n - 1), 2.0 / (n - 1)};
    g.values.resize(g.size());
    Rng rng(s.seed);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double v = quadric_value(s, grid_coord(i, n), grid_coord(j, n), grid_coord(k, n));
                if (s.noise_sd > 0) v += rng.normal(0.0, s.noise_sd);
                g.at(i, j, k) = v;
            }
    return g;
}

struct LabeledGrid {
    VoxelGrid grid;
    int family = 1;
    QuadricSpec spec;
};

/// Noise level of the two simulation setups: 1 is noiseless, 2 adds N(0, 0.1^2).
inline double setup_noise(int setup)
{
    if (setup == 1) return 0.0;
    if (setup == 2) return 0.1;
    throw InputError("setup must be 1 or 2");
}

/**
 * n fields per family, ordered family by family. Field i draws its
 * coefficients and noise from derive_seed(seed, i).
 */
inline std::vector<LabeledGrid> gen_field_suite(int n_per_family, int setup, std::uint64_t seed)
{
    if (n_per_family < 1) throw InputError("n_per_family must be positive");
    const double sd = setup_noise(setup);
    std::vector<LabeledGrid> out;
    for (int fam = 1; fam <= 4; ++fam)
        for (int l = 0; l < n_per_family; ++l) {
            const std::uint64_t idx = std::uint64_t(fam - 1) * n_per_family + l;
            Rng rng(derive_seed(seed, idx));
            QuadricSpec s;
            s.family = fam;
            s.alpha = rng.uniform(0.5, 1.0);
            s.beta = rng.uniform(0.5, 1.0);
            s.gamma = rng.uniform(0.5, 1.0);
            const double ring = rng.uniform(0.4, 0.6);
            if (fam == 4) s.delta = ring;
            s.noise_sd = sd;
            s.seed = rng.next();
            out.push_back({gen_quadric(s), fam, s});
        }
    return out;
}

/// Global (min, max) over a set of grids, for shared normalisation.
inline std::pair<double, double> global_range(const std::vector<const VoxelGrid*>& grids)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const VoxelGrid* g : grids)
        for (double v : g->values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return {lo, hi};
}

/**
 * Distance field g(x) = max(0, R - min_i |x - p_i|) sampled on a regular grid
 * covering the points padded by R, then triangulated. Its t-superlevel set is
 * the union of balls of radius R - t about the points.
 */
inline PLField gen_point_cloud_field(const std::vector<Point>& points, int dim, double radius, int resolution)
{
    if (points.empty()) throw InputError("point cloud must be non-empty");
    if (!(radius > 0)) throw InputError("radius must be positive");
    if (resolution < 2) throw InputError("resolution must be at least 2");
    if (dim != 2 && dim != 3) throw InputError("dimension must be 2 or 3");
    Point lo = points[0], hi = points[0];
    for (const Point& p : points)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    VoxelGrid g;
    const double pad = radius * 1.1;
    for (int a = 0; a < 3; ++a) {
        const bool used = a < dim;
        g.dims[a] = used ? resolution : 1;
        g.origin[a] = used ? lo[a] - pad : 0.0;
        g.spacing[a] = used ? (hi[a] - lo[a] + 2 * pad) / (resolution - 1) : 1.0;
    }
    g.values.resize(g.size());
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i) {
                const Point x = g.position(i, j, k);
                double m = std::numeric_limits<double>::infinity();
                for (const Point& p : points) {
                    Point q = p;
                    if (dim == 2) q[2] = x[2];
                    const double dx = x[0] - q[0], dy = x[1] - q[1], dz = x[2] - q[2];
                    m = std::min(m, std::sqrt(dx * dx + dy * dy + dz * dz));
                }
                g.at(i, j, k) = std::max(0.0, radius - m);
            }
    return voxel_to_pl(g);
}

/**
 * Smooth 2D glyph shaped like the digit 2: a Gaussian tube of width `width`
 * around a polyline (top arc, diagonal, bottom bar), rotated by `angle`
 * about the origin and sampled on a resolution x resolution grid over [-1, 1]^2.
 * Values lie in (0, 1] and vanish towards the boundary.
 */
inline VoxelGrid gen_glyph_2d(int resolution, double angle = 0.0, double width = 0.12)
{
    if (resolution < 2) throw InputError("resolution must be at least 2");
    std::vector<Point> stroke;
    for (int i = 0; i <= 12; ++i) {
        const double a = std::numbers::pi * (1.0 - double(i) / 12.0 * 1.25);
        stroke.push_back({0.3 * std::cos(a), 0.3 + 0.25 * std::sin(a), 0});
    }
    stroke.push_back({-0.4, -0.45, 0});
    stroke.push_back({0.45, -0.45, 0});
    const double c = std::cos(angle), s = std::sin(angle);
    for (Point& p : stroke) p = {c * p[0] - s * p[1], s * p[0] + c * p[1], 0};

    VoxelGrid g;
    g.dims = {resolution, resolution, 1};
    g.origin = {-1, -1, 0};
    g.spacing = {2.0 / (resolution - 1), 2.0 / (resolution - 1), 1.0};
    g.values.resize(g.size());
    for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i) {
            const Point x = g.position(i, j, 0);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q + 1 < stroke.size(); ++q) {
                const Point& a = stroke[q];
                const Point& b = stroke[q + 1];
                const double ux = b[0] - a[0], uy = b[1] - a[1];
                const double len2 = ux * ux + uy * uy;
                double u = ((x[0] - a[0]) * ux + (x[1] - a[1]) * uy) / len2;
                u = std::clamp(u, 0.0, 1.0);
                const double dx = x[0] - a[0] - u * ux, dy = x[1] - a[1] - u * uy;
                best = std::min(best, dx * dx + dy * dy);
            }
            // Thicker head at the start of the stroke breaks the glyph's symmetry further.
            const double hx = x[0] - stroke.front()[0], hy = x[1] - stroke.front()[1];
            const double head = 0.6 * std::exp(-(hx * hx + hy * hy) / (0.04));
            g.at(i, j, 0) = std::max(std::exp(-best / (width * width)), head);
        }
    return g;
}

}  // namespace lect

#endif  // LECT_GENERATORS_HPP
