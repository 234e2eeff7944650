// Test-only helpers and reference computations that do not reuse the code under test.
#ifndef LECT_TESTS_ORACLES_HPP
#define LECT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "lect/lect.hpp"

namespace oracle {

using lect::Index;
using lect::Point;
using lect::Simplex;

/// Random closed complex: random points in [-1, 1]^dim and up to max_cells random top cells, at most max_simplices after closure.
inline lect::Complex random_complex(lect::Rng& rng, int dim, std::size_t max_simplices = 200, int max_cells = 10,
                                   int max_vertices = 15)
{
    lect::Complex k;
    k.dim = dim;
    const int nv = 4 + int(rng.below(std::uint64_t(max_vertices - 3)));
    for (int i = 0; i < nv; ++i) {
        Point p{0, 0, 0};
        for (int a = 0; a < dim; ++a) p[a] = rng.uniform(-1.0, 1.0);
        k.points.push_back(p);
    }
    std::vector<Simplex> tops;
    const int ncells = 1 + int(rng.below(std::uint64_t(max_cells)));
    for (int c = 0; c < ncells; ++c) {
        const int size = 1 + int(rng.below(std::uint64_t(dim + 1)));
        std::vector<Index> ids(static_cast<std::size_t>(nv));
        for (int i = 0; i < nv; ++i) ids[std::size_t(i)] = Index(i);
        rng.shuffle(ids);
        ids.resize(std::size_t(size));
        std::vector<Simplex> trial = tops;
        trial.push_back(Simplex::from_range(ids.begin(), ids.end()));
        if (lect::close_simplices(trial).size() > max_simplices) continue;
        tops = trial;
    }
    k.simplices = lect::close_simplices(tops);
    return k;
}

/// Euler characteristic of the first barycentric subdivision: one vertex per
/// simplex, one k-simplex per chain of k+1 nested simplices.
inline long long barycentric_chi(const std::vector<Simplex>& simplices)
{
    auto is_face = [](const Simplex& a, const Simplex& b) {
        if (a.n >= b.n) return false;
        for (Index v : a)
            if (!b.contains(v)) return false;
        return true;
    };
    const std::size_t n = simplices.size();
    // chains[i] = number of chains of each length ending at simplex i.
    std::vector<std::vector<long long>> chains(n, std::vector<long long>(5, 0));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return simplices[a].n < simplices[b].n; });
    long long chi = 0;
    for (std::size_t oi = 0; oi < n; ++oi) {
        const std::size_t i = order[oi];
        chains[i][1] = 1;
        for (std::size_t oj = 0; oj < oi; ++oj) {
            const std::size_t j = order[oj];
            if (!is_face(simplices[j], simplices[i])) continue;
            for (int len = 1; len < 4; ++len) chains[i][std::size_t(len + 1)] += chains[j][std::size_t(len)];
        }
        for (int len = 1; len <= 4; ++len) chi += (len % 2 == 1 ? 1 : -1) * chains[i][std::size_t(len)];
    }
    return chi;
}

/// chi(K ∩ {x . v <= h}) by explicit clipping and triangulation.
inline long long halfspace_chi(const lect::Complex& k, const Point& v, double h)
{
    return lect::euler_characteristic(lect::halfspace_clip(k, v, h).complex);
}

/// Grid field with jittered vertex positions and random values in (0, 1).
inline lect::PLField jittered_field(lect::Rng& rng, int n, int dim, double jitter = 0.2)
{
    lect::VoxelGrid g;
    g.dims = {n, n, dim == 3 ? n : 1};
    g.origin = {-1, -1, dim == 3 ? -1.0 : 0.0};
    const double h = 2.0 / (n - 1);
    g.spacing = {h, h, dim == 3 ? h : 1.0};
    g.values.resize(g.size());
    for (double& v : g.values) v = rng.uniform(0.02, 0.98);
    lect::PLField f = lect::voxel_to_pl(g);
    for (Point& p : f.complex.points)
        for (int a = 0; a < dim; ++a) p[a] += rng.uniform(-jitter, jitter) * h;
    lect::compute_bounding_box(f);
    return f;
}

/// Cubical Euler characteristic of the set of grid nodes marked true: a node,
/// edge, square or cube is present when all of its corner nodes are.
inline long long cubical_chi(const std::vector<char>& in, int nx, int ny, int nz)
{
    auto at = [&](int i, int j, int k) -> bool {
        if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) return false;
        return in[(std::size_t(k) * ny + j) * nx + i] != 0;
    };
    long long chi = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (!at(i, j, k)) continue;
                // Cells whose lowest corner is (i, j, k).
                for (int dx = 0; dx <= 1; ++dx)
                    for (int dy = 0; dy <= 1; ++dy)
                        for (int dz = 0; dz <= 1; ++dz) {
                            bool all = true;
                            for (int a = 0; a <= dx && all; ++a)
                                for (int b = 0; b <= dy && all; ++b)
                                    for (int c = 0; c <= dz && all; ++c) all = at(i + a, j + b, k + c);
                            if (all) chi += ((dx + dy + dz) % 2 == 0) ? 1 : -1;
                        }
            }
    return chi;
}

/**
 * Evaluates the piecewise-linear interpolant of a voxel grid under the
 * Kuhn split (simplex chosen by sorting the local coordinates) at a point.
 */
inline double kuhn_interpolate(const lect::VoxelGrid& g, const Point& x)
{
    int base[3];
    double u[3];
    for (int a = 0; a < 3; ++a) {
        if (g.dims[a] == 1) {
            base[a] = 0;
            u[a] = 0;
            continue;
        }
        const double c = (x[a] - g.origin[a]) / g.spacing[a];
        int b = int(std::floor(c));
        b = std::clamp(b, 0, g.dims[a] - 2);
        base[a] = b;
        u[a] = std::clamp(c - b, 0.0, 1.0);
    }
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) { return u[a] > u[b]; });
    // Walk from the base corner along axes in decreasing coordinate order.
    int idx[3] = {base[0], base[1], base[2]};
    double value = 0, prev = 1.0;
    for (int s = 0; s < 3; ++s) {
        const double w = prev - u[order[s]];
        value += w * g.at(idx[0], idx[1], idx[2]);
        prev = u[order[s]];
        if (g.dims[order[s]] > 1) idx[order[s]] += 1;
    }
    value += prev * g.at(idx[0], idx[1], idx[2]);
    return value;
}

/// Height-sampled ECT computed from simplex maxima, independent of the library's sampler.
inline std::vector<long long> ect_samples(const lect::Complex& k, const Point& v, const std::vector<double>& heights)
{
    std::vector<long long> out(heights.size(), 0);
    for (const Simplex& s : k.simplices) {
        double m = -INFINITY;
        for (Index i : s) m = std::max(m, k.points[i][0] * v[0] + k.points[i][1] * v[1] + k.points[i][2] * v[2]);
        for (std::size_t j = 0; j < heights.size(); ++j)
            if (m <= heights[j]) out[j] += (s.n % 2 == 1) ? 1 : -1;
    }
    return out;
}

/// Random admissible weights: maximal simplices draw k/8, faces take the max of their cofaces.
inline lect::WeightedComplex random_weighted(lect::Rng& rng, int dim)
{
    lect::WeightedComplex w;
    w.complex = random_complex(rng, dim);
    const auto& s = w.complex.simplices;
    w.weights.assign(s.size(), -1.0);
    const auto tops = lect::maximal_simplices(s);
    for (std::size_t i = s.size(); i-- > 0;) {
        if (std::binary_search(tops.begin(), tops.end(), s[i])) w.weights[i] = double(rng.below(9)) / 8.0;
        const unsigned full = (1u << s[i].n) - 1;
        for (int k = 0; k < s[i].n && s[i].n > 1; ++k) {
            const auto it = std::lower_bound(s.begin(), s.end(), s[i].face(full & ~(1u << k)));
            double& fw = w.weights[std::size_t(it - s.begin())];
            fw = std::max(fw, w.weights[i]);
        }
    }
    return w;
}

}  // namespace oracle

#endif  // LECT_TESTS_ORACLES_HPP
