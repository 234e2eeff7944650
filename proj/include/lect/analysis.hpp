#ifndef LECT_ANALYSIS_HPP
#define LECT_ANALYSIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "complex.hpp"
#include "field.hpp"
#include "parallel.hpp"
#include "transforms.hpp"

namespace lect {

/**
 * How the threshold axis is integrated. Both rules integrate over [0, t_max]
 * and treat the transform on (0, t_min] as equal to the t_min slice.
 *
 *  - trapezoid: trapezoid rule between consecutive thresholds.
 *  - step: the value at t_k is held over (t_{k-1}, t_k]. SELECT is
 *    left-continuous in t, so this is exact for piecewise-constant fields
 *    whenever every field value is a threshold.
 */
enum class ThresholdRule { trapezoid, step };

/// Trapezoid weights over a sorted axis (a single point gets weight 0).
inline std::vector<double> trapezoid_weights(const std::vector<double>& x)
{
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double half = 0.5 * (x[i + 1] - x[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    return w;
}

inline std::vector<double> threshold_weights(const std::vector<double>& t, ThresholdRule rule)
{
    if (t.empty()) return {};
    std::vector<double> w;
    if (rule == ThresholdRule::step) {
        w.resize(t.size());
        double prev = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            w[k] = t[k] - prev;
            prev = t[k];
        }
    } else {
        w = trapezoid_weights(t);
        w[0] += t[0];
    }
    return w;
}

struct DistanceOptions {
    double p = 2.0;
    ThresholdRule rule = ThresholdRule::trapezoid;
    // Divide the integral by the measure of the (h, t) box before the 1/p power.
    bool normalized = false;
};

inline void check_same_axes(const TransformGrid& a, const TransformGrid& b)
{
    if (a.kind != b.kind) throw InputError("transform kinds differ");
    if (a.heights != b.heights || a.thresholds != b.thresholds) throw InputError("transform axes differ");
    if (a.directions.size() != b.directions.size()) throw InputError("direction counts differ");
    for (std::size_t i = 0; i < a.directions.size(); ++i)
        if (a.directions[i] != b.directions[i]) throw InputError("direction lists differ");
    if (a.values.size() != b.values.size()) throw InputError("value array sizes differ");
}

/// Quadrature weights of a (direction, height, threshold) grid.
struct GridQuadrature {
    std::size_t nd = 0, nh = 0, nt = 0;
    std::vector<double> wh, wt;
    double p = 2.0;
    double measure = 1.0;

    GridQuadrature(std::size_t directions, const std::vector<double>& heights,
                   const std::vector<double>& thresholds, const DistanceOptions& opt)
        : nd(directions), nh(heights.size()), nt(thresholds.size()), wh(trapezoid_weights(heights)),
          wt(threshold_weights(thresholds, opt.rule)), p(opt.p)
    {
        if (!(opt.p >= 1.0)) throw InputError("p must be at least 1");
        if (opt.normalized) {
            double mh = 0, mt = 0;
            for (double w : wh) mh += w;
            for (double w : wt) mt += w;
            measure = mh * mt;
        }
    }

    /// (sum_i (1/nd) sum_j wh_j sum_k wt_k |a - b|^p)^(1/p) over flat arrays.
    template <typename A, typename B>
    double distance(std::span<const A> a, std::span<const B> b) const
    {
        double total = 0;
        for (std::size_t i = 0; i < nd; ++i) total += direction_term(a, b, i, i);
        return finish(total);
    }

    /// Same as distance(), comparing direction i of a with direction perm(i) of b.
    template <typename A, typename B, typename Perm>
    double distance_permuted(std::span<const A> a, std::span<const B> b, Perm&& perm) const
    {
        double total = 0;
        for (std::size_t i = 0; i < nd; ++i) total += direction_term(a, b, i, perm(i));
        return finish(total);
    }

    template <typename A, typename B>
    double direction_term(std::span<const A> a, std::span<const B> b, std::size_t ia, std::size_t ib) const
    {
        double sum = 0;
        for (std::size_t j = 0; j < nh; ++j) {
            if (wh[j] == 0) continue;
            const std::size_t oa = (ia * nh + j) * nt, ob = (ib * nh + j) * nt;
            double row = 0;
            for (std::size_t k = 0; k < nt; ++k) {
                const double diff = std::abs(double(a[oa + k]) - double(b[ob + k]));
                row += wt[k] * (p == 1.0 ? diff : (p == 2.0 ? diff * diff : std::pow(diff, p)));
            }
            sum += wh[j] * row;
        }
        return sum;
    }

    double finish(double total) const
    {
        total /= double(nd);
        if (measure > 0) total /= measure;
        return p == 1.0 ? total : (p == 2.0 ? std::sqrt(total) : std::pow(total, 1.0 / p));
    }
};

/// L^p distance between two transforms sharing the same axes.
inline double select_distance(const TransformGrid& a, const TransformGrid& b, const DistanceOptions& opt = {})
{
    check_same_axes(a, b);
    GridQuadrature q(a.num_directions(), a.heights, a.thresholds, opt);
    return q.distance(std::span<const std::int32_t>(a.values), std::span<const std::int32_t>(b.values));
}

inline double select_distance(const TransformGrid& a, const TransformGrid& b, double p)
{
    DistanceOptions opt;
    opt.p = p;
    return select_distance(a, b, opt);
}

/// Threshold-integrated SELECT: one real curve per direction.
struct MarginalCurveSet {
    DirectionSet directions;
    std::vector<double> heights;
    std::vector<double> values;  // (direction, height), height fastest

    double at(std::size_t i, std::size_t j) const { return values[i * heights.size() + j]; }
};

inline MarginalCurveSet marginal_curves(const TransformGrid& g, ThresholdRule rule = ThresholdRule::step)
{
    if (g.kind != TransformKind::SELECT) throw InputError("marginal curves need a SELECT transform");
    const std::vector<double> wt = threshold_weights(g.thresholds, rule);
    MarginalCurveSet m;
    m.directions = g.directions;
    m.heights = g.heights;
    m.values.assign(g.num_directions() * g.num_heights(), 0.0);
    for (std::size_t i = 0; i < g.num_directions(); ++i)
        for (std::size_t j = 0; j < g.num_heights(); ++j) {
            double acc = 0;
            for (std::size_t k = 0; k < g.num_thresholds(); ++k) acc += wt[k] * g.at(i, j, k);
            m.values[i * g.num_heights() + j] = acc;
        }
    return m;
}

/// L^p distance between marginal curve sets on equal axes (mean over directions, trapezoid in h).
inline double marginal_distance(const MarginalCurveSet& a, const MarginalCurveSet& b, double p = 2.0)
{
    if (a.heights != b.heights || a.directions.size() != b.directions.size())
        throw InputError("marginal curve axes differ");
    DistanceOptions opt;
    opt.p = p;
    opt.rule = ThresholdRule::step;
    GridQuadrature q(a.directions.size(), a.heights, {1.0}, opt);
    return q.distance(std::span<const double>(a.values), std::span<const double>(b.values));
}

/**
 * Simplicial complex with a weight per simplex. Admissible weights are
 * constant on open simplices and each face carries the maximum weight of the
 * simplices it bounds.
 */
struct WeightedComplex {
    Complex complex;
    std::vector<double> weights;  // parallel to complex.simplices
};

/// Checks admissibility; returns false with the offending simplex index.
inline bool is_admissible(const WeightedComplex& w, std::size_t* bad = nullptr)
{
    const auto& s = w.complex.simplices;
    if (w.weights.size() != s.size()) throw InputError("one weight per simplex required");
    std::vector<double> coface_max(s.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].n < 2) continue;
        const unsigned full = (1u << s[i].n) - 1;
        for (int k = 0; k < s[i].n; ++k) {
            const Simplex f = s[i].face(full & ~(1u << k));
            auto it = std::lower_bound(s.begin(), s.end(), f);
            if (it == s.end() || !(*it == f)) throw InvariantError("weighted complex is not closed");
            double& m = coface_max[it - s.begin()];
            m = std::max(m, w.weights[i]);
        }
    }
    // Only immediate cofaces are checked; admissibility then propagates.
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool has_coface = coface_max[i] > -std::numeric_limits<double>::infinity();
        if (has_coface && w.weights[i] != coface_max[i]) {
            if (bad) *bad = i;
            return false;
        }
    }
    return true;
}

/// Real-valued right-continuous step function of height.
struct WeightedCurve {
    std::vector<std::pair<double, double>> jumps;

    double value_at(double h) const
    {
        auto it = std::upper_bound(jumps.begin(), jumps.end(), h,
                                   [](double x, const std::pair<double, double>& j) { return x < j.first; });
        return it == jumps.begin() ? 0.0 : std::prev(it)->second;
    }
    std::vector<double> sample(const std::vector<double>& heights) const
    {
        std::vector<double> out;
        for (double h : heights) out.push_back(value_at(h));
        return out;
    }
};

/// Weighted Euler curve: sum of (-1)^dim * weight over simplices below height h.
inline WeightedCurve weighted_euler_curve(const WeightedComplex& w, const Point& v)
{
    std::size_t bad = 0;
    if (!is_admissible(w, &bad)) throw InputError("inadmissible weights at simplex " + std::to_string(bad));
    const auto vh = heights_of(w.complex.points, v);
    std::vector<std::pair<double, double>> ev;
    for (std::size_t i = 0; i < w.complex.simplices.size(); ++i) {
        const Simplex& s = w.complex.simplices[i];
        double m = vh[s.v[0]];
        for (int k = 1; k < s.n; ++k) m = std::max(m, vh[s.v[k]]);
        ev.emplace_back(m, s.sign() * w.weights[i]);
    }
    std::sort(ev.begin(), ev.end());
    WeightedCurve c;
    double value = 0;
    for (std::size_t i = 0; i < ev.size();) {
        const double h = ev[i].first;
        double delta = 0;
        for (; i < ev.size() && ev[i].first == h; ++i) delta += ev[i].second;
        if (delta != 0) {
            value += delta;
            c.jumps.emplace_back(h, value);
        }
    }
    return c;
}

/**
 * SELECT of the piecewise-constant field defined by admissible weights:
 * the superlevel set at t is the subcomplex of simplices with weight >= t.
 */
inline TransformGrid select_transform(const WeightedComplex& w, ScanRequest req, int threads = 0)
{
    req.kind = TransformKind::SELECT;
    validate_request(req);
    std::size_t bad = 0;
    if (!is_admissible(w, &bad)) throw InputError("inadmissible weights at simplex " + std::to_string(bad));
    return detail::scan_complexes(
        req, req.thresholds.size(),
        [&](std::size_t k) {
            Complex sub;
            sub.dim = w.complex.dim;
            sub.points = w.complex.points;
            for (std::size_t i = 0; i < w.complex.simplices.size(); ++i)
                if (w.weights[i] >= req.thresholds[k]) sub.simplices.push_back(w.complex.simplices[i]);
            return sub;
        },
        threads);
}

/// Grid whose direction i holds the input's direction (i + shift) mod n.
inline TransformGrid shift_directions(const TransformGrid& g, long long shift)
{
    const long long n = (long long)g.num_directions();
    TransformGrid out = g;
    const std::size_t block = g.num_heights() * g.num_thresholds();
    for (long long i = 0; i < n; ++i) {
        const long long src = ((i + shift) % n + n) % n;
        std::copy_n(g.values.begin() + src * block, block, out.values.begin() + i * block);
    }
    return out;
}

struct AlignResult {
    long long shift = 0;
    double distance = 0;
    std::vector<double> profile;  // distance for every shift 0..n-1
};

/**
 * Cyclic alignment of two transforms on the same uniform circle. Returns the
 * shift j minimising dist(A, shift_directions(B, j)). If B is the transform of
 * A's field rotated by +2*pi*j0/n, the minimiser is j0.
 */
inline AlignResult align_2d(const TransformGrid& a, const TransformGrid& b, const DistanceOptions& opt = {},
                            int threads = 0)
{
    if (a.directions.scheme != DirectionScheme::uniform_circle ||
        b.directions.scheme != DirectionScheme::uniform_circle)
        throw InputError("align_2d needs uniform circle direction sets");
    check_same_axes(a, b);
    const std::size_t n = a.num_directions();
    GridQuadrature q(n, a.heights, a.thresholds, opt);
    AlignResult r;
    r.profile.assign(n, 0.0);
    parallel_for(n, threads, [&](std::size_t j) {
        r.profile[j] = q.distance_permuted(std::span<const std::int32_t>(a.values),
                                           std::span<const std::int32_t>(b.values),
                                           [&](std::size_t i) { return (i + j) % n; });
    });
    r.shift = 0;
    r.distance = r.profile[0];
    for (std::size_t j = 1; j < n; ++j)
        if (r.profile[j] < r.distance) {
            r.distance = r.profile[j];
            r.shift = (long long)j;
        }
    return r;
}

inline AlignResult align_2d(const TransformGrid& a, const TransformGrid& b, double p)
{
    DistanceOptions opt;
    opt.p = p;
    return align_2d(a, b, opt);
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline Matrix3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Point mat_apply(const Matrix3& r, const Point& x)
{
    return {r[0][0] * x[0] + r[0][1] * x[1] + r[0][2] * x[2], r[1][0] * x[0] + r[1][1] * x[1] + r[1][2] * x[2],
            r[2][0] * x[0] + r[2][1] * x[1] + r[2][2] * x[2]};
}

inline Matrix3 transpose(const Matrix3& r)
{
    Matrix3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = r[j][i];
    return t;
}

inline bool is_orthogonal(const Matrix3& r, double tol = 1e-12)
{
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += r[i][k] * r[j][k];
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol) return false;
        }
    return true;
}

/// Planar rotation by angle 2*pi*j/n built from the exact circle points.
inline Matrix3 rotation_2d(long long j, long long n)
{
    const Point c = unit_circle_point(j, n);
    return {{{c[0], -c[1], 0}, {c[1], c[0], 0}, {0, 0, 1}}};
}

/// Pushes the field forward along an orthogonal map: (R_* f)(x) = f(R^-1 x).
inline PLField rotate_field(const PLField& f, const Matrix3& r)
{
    if (!is_orthogonal(r)) throw InputError("rotate_field: matrix is not orthogonal");
    if (f.dim() == 2 && (r[0][2] != 0 || r[1][2] != 0 || r[2][0] != 0 || r[2][1] != 0))
        throw InputError("rotate_field: 2D fields need a planar map");
    PLField out = f;
    for (Point& p : out.complex.points) {
        p = mat_apply(r, p);
        if (f.dim() == 2) p[2] = 0.0;
    }
    compute_bounding_box(out);
    return out;
}

}  // namespace lect

#endif  // LECT_ANALYSIS_HPP
