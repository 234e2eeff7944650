#ifndef LECT_TRANSFORMS_HPP
#define LECT_TRANSFORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "complex.hpp"
#include "field.hpp"
#include "parallel.hpp"

namespace lect {

/// Axes of a transform evaluation.
struct ScanRequest {
    DirectionSet directions;
    std::vector<double> heights;
    std::vector<double> thresholds;
    TransformKind kind = TransformKind::SELECT;
};

inline void validate_request(const ScanRequest& req)
{
    if (req.directions.size() == 0 || req.heights.empty() || req.thresholds.empty())
        throw InputError("scan request axes must be non-empty");
    if (!std::is_sorted(req.heights.begin(), req.heights.end()))
        throw InputError("heights must be sorted");
    if (!std::is_sorted(req.thresholds.begin(), req.thresholds.end()))
        throw InputError("thresholds must be sorted");
    if (req.kind != TransformKind::ECT)
        for (double t : req.thresholds) check_threshold(t);
    for (const Point& v : req.directions.directions)
        if (std::abs(norm(v) - 1.0) > 1e-12) throw InputError("directions must be unit vectors");
}

/// n uniformly spaced values on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = hi;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return out;
}

/// Thresholds k/n, k = 1..n: uniform on (0, 1] with t = 0 excluded.
inline std::vector<double> uniform_thresholds(std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = double(k + 1) / double(n);
    return t;
}

/// Largest |x . v| over the points and directions.
inline double height_radius(const std::vector<Point>& pts, const DirectionSet& dirs)
{
    double r = 0;
    for (const Point& v : dirs.directions)
        for (const Point& p : pts) r = std::max(r, std::abs(dot(p, v)));
    return r;
}

/**
 * Uniform height axis on [-R', R'] where R' pads the radius R by one step of
 * the unpadded grid, so the first sample sees nothing and the last sees the
 * whole support.
 */
inline std::vector<double> padded_heights(double radius, std::size_t n)
{
    if (n < 2) throw InputError("need at least two heights");
    if (!(radius > 0)) radius = 1.0;
    const double padded = radius + 2.0 * radius / double(n - 1);
    return linspace(-padded, padded, n);
}

namespace detail {

inline std::int32_t index_at_or_above(const std::vector<double>& heights, double h)
{
    return std::int32_t(std::lower_bound(heights.begin(), heights.end(), h) - heights.begin());
}

}  // namespace detail

/**
 * Euler curve of the complex in direction v as exact jump events. A simplex
 * enters the sublevel set {x . v <= h} once its highest vertex does; events
 * at equal heights are merged, and events with zero net change are dropped.
 */
inline EulerCurve ect_curve(const Complex& k, const Point& v)
{
    const std::vector<double> vh = heights_of(k.points, v);
    std::vector<std::pair<double, int>> ev;
    ev.reserve(k.simplices.size());
    for (const Simplex& s : k.simplices) {
        double m = vh[s.v[0]];
        for (int i = 1; i < s.n; ++i) m = std::max(m, vh[s.v[i]]);
        ev.emplace_back(m, s.sign());
    }
    std::sort(ev.begin(), ev.end());
    EulerCurve c;
    int value = 0;
    for (std::size_t i = 0; i < ev.size();) {
        const double h = ev[i].first;
        int delta = 0;
        for (; i < ev.size() && ev[i].first == h; ++i) delta += ev[i].second;
        if (delta != 0) {
            value += delta;
            c.jumps.emplace_back(h, value);
        }
    }
    return c;
}

/**
 * Samples the Euler curve at sorted heights without sorting simplices: each
 * simplex is binned at the first grid height at or above its highest vertex,
 * then a prefix sum yields the curve.
 */
inline void sample_ect(const Complex& k, const Point& v, const std::vector<double>& heights,
                       std::span<std::int32_t> out, std::size_t stride = 1)
{
    const std::size_t nh = heights.size();
    std::vector<std::int32_t> vbin(k.points.size());
    for (std::size_t i = 0; i < k.points.size(); ++i)
        vbin[i] = detail::index_at_or_above(heights, dot(k.points[i], v));
    std::vector<std::int32_t> hist(nh + 1, 0);
    for (const Simplex& s : k.simplices) {
        std::int32_t b = vbin[s.v[0]];
        for (int i = 1; i < s.n; ++i) b = std::max(b, vbin[s.v[i]]);
        hist[b] += s.sign();
    }
    std::int32_t acc = 0;
    for (std::size_t j = 0; j < nh; ++j) {
        acc += hist[j];
        out[j * stride] = acc;
    }
}

inline std::vector<std::int32_t> sample_ect(const Complex& k, const Point& v, const std::vector<double>& heights)
{
    std::vector<std::int32_t> out(heights.size());
    sample_ect(k, v, heights, out);
    return out;
}

namespace detail {

template <typename ComplexFor>
TransformGrid scan_complexes(const ScanRequest& req, std::size_t n_slices, ComplexFor&& complex_for, int threads)
{
    TransformGrid g;
    g.kind = req.kind;
    g.directions = req.directions;
    g.heights = req.heights;
    g.thresholds = req.thresholds;
    g.allocate();

    std::vector<Complex> slices(n_slices);
    parallel_for(n_slices, threads, [&](std::size_t k) { slices[k] = complex_for(k); });

    const std::size_t nd = g.num_directions(), nh = g.num_heights(), nt = g.num_thresholds();
    parallel_for(nd * n_slices, threads, [&](std::size_t job) {
        const std::size_t k = job % n_slices, i = job / n_slices;
        std::span<std::int32_t> row(g.values.data() + g.index(i, 0, k), (nh - 1) * nt + 1);
        sample_ect(slices[k], g.directions[i], g.heights, row, nt);
    });
    return g;
}

}  // namespace detail

/// SELECT values chi({x . v <= h, f(x) >= t}) on the request grid.
inline TransformGrid select_transform(const PLField& f, ScanRequest req, int threads = 0)
{
    req.kind = TransformKind::SELECT;
    validate_request(req);
    return detail::scan_complexes(
        req, req.thresholds.size(),
        [&](std::size_t k) { return superlevel_restrict(f, req.thresholds[k]).complex; }, threads);
}

/// LECT values chi({x . v <= h, f(x) == t}) on the request grid.
inline TransformGrid lect_transform(const PLField& f, ScanRequest req, int threads = 0)
{
    req.kind = TransformKind::LECT;
    validate_request(req);
    return detail::scan_complexes(
        req, req.thresholds.size(), [&](std::size_t k) { return level_restrict(f, req.thresholds[k]).complex; },
        threads);
}

/// ECT of a complex; the threshold axis holds the single value 1.
inline TransformGrid ect_transform(const Complex& k, ScanRequest req, int threads = 0)
{
    req.kind = TransformKind::ECT;
    req.thresholds = {1.0};
    validate_request(req);
    return detail::scan_complexes(req, 1, [&](std::size_t) { return k; }, threads);
}

inline TransformGrid transform(const PLField& f, const ScanRequest& req, int threads = 0)
{
    switch (req.kind) {
    case TransformKind::SELECT: return select_transform(f, req, threads);
    case TransformKind::LECT: return lect_transform(f, req, threads);
    case TransformKind::ECT: return ect_transform(f.complex, req, threads);
    }
    throw InputError("unknown transform kind");
}

/// One SELECT curve at fixed (direction, threshold), as exact jump events.
inline EulerCurve euler_scan(const PLField& f, const Point& v, double t)
{
    return ect_curve(superlevel_restrict(f, t).complex, v);
}

inline std::vector<int> euler_scan(const PLField& f, const Point& v, double t, const std::vector<double>& heights)
{
    return euler_scan(f, v, t).sample(heights);
}

}  // namespace lect

#endif  // LECT_TRANSFORMS_HPP
