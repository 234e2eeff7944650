#ifndef LECT_MODULI_HPP
#define LECT_MODULI_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "complex.hpp"
#include "field.hpp"
#include "generators.hpp"
#include "parallel.hpp"
#include "transforms.hpp"

namespace lect {

/// Parameters of the field class: dimension, jump bound k, direction-ball
/// radius delta_k (radians), vertical gap delta_B, and the geometric delta
/// forwarded to the shape-class bound.
struct ModuliParams {
    int d = 3;
    int k = 1;
    double delta_k = 0.1;
    double delta_B = 0.1;
    double delta = 1.0;
};

inline void validate(const ModuliParams& p)
{
    if (p.d < 1 || p.k < 1) throw InputError("moduli: d and k must be positive");
    if (!(p.delta_k > 0) || !(p.delta_B > 0) || !(p.delta > 0))
        throw InputError("moduli: deltas must be strictly positive");
    if (p.delta_B > 1.0 / 3.0 + 1e-12) throw InputError("moduli: delta_B must not exceed 1/3");
}

struct GapResult {
    bool pass = true;
    std::optional<Simplex> witness;  // first edge with |f(x) - f(y)| < 3 delta_B
    double gap = 0;                  // |f(x) - f(y)| on the witness edge
};

/// Vertical gap condition: every edge spans at least 3 * delta_B in value.
inline GapResult check_gap_condition(const PLField& f, double delta_B)
{
    GapResult r;
    for (const Simplex& e : f.simplices()) {
        if (e.n != 2) continue;
        const double gap = std::abs(f.values[e.v[0]] - f.values[e.v[1]]);
        if (gap < 3.0 * delta_B) {
            r.pass = false;
            r.witness = e;
            r.gap = gap;
            return r;
        }
    }
    return r;
}

struct JumpReport {
    std::size_t max_jumps = 0;
    std::size_t direction = 0;  // argmax indices into the sampled axes
    std::size_t threshold = 0;
};

/// Maximum number of jump events over the sampled (direction, threshold) pairs.
inline JumpReport max_jump_count(const PLField& f, const DirectionSet& dirs, const std::vector<double>& thresholds,
                                 int threads = 0)
{
    for (double t : thresholds) check_threshold(t);
    std::vector<Complex> levels(thresholds.size());
    parallel_for(thresholds.size(), threads,
                 [&](std::size_t k) { levels[k] = superlevel_restrict(f, thresholds[k]).complex; });
    std::vector<std::size_t> counts(dirs.size() * thresholds.size());
    parallel_for(counts.size(), threads, [&](std::size_t job) {
        const std::size_t i = job / thresholds.size(), k = job % thresholds.size();
        counts[job] = ect_curve(levels[k], dirs[i]).num_jumps();
    });
    JumpReport r;
    for (std::size_t job = 0; job < counts.size(); ++job)
        if (counts[job] > r.max_jumps) {
            r.max_jumps = counts[job];
            r.direction = job / thresholds.size();
            r.threshold = job % thresholds.size();
        }
    return r;
}

/// Net change of the Euler curve of `k` in direction v exactly at height h.
inline long long jump_at(const Complex& k, const Point& v, double h)
{
    const auto vh = heights_of(k.points, v);
    long long delta = 0;
    for (const Simplex& s : k.simplices) {
        double m = vh[s.v[0]];
        for (int i = 1; i < s.n; ++i) m = std::max(m, vh[s.v[i]]);
        if (m == h) delta += s.sign();
    }
    return delta;
}

/// Index of the clipped vertex lying on input edge e, if any.
inline std::optional<Index> crossing_vertex(const ClippedComplex& c, const Simplex& e)
{
    for (std::size_t i = 0; i < c.provenance.size(); ++i)
        if (c.provenance[i].a == e.v[0] && c.provenance[i].b == e.v[1]) return Index(i);
    return std::nullopt;
}

/**
 * Whether the crossing of edge e with the t-superlevel set is observed by the
 * Euler curve in direction v: the curve changes at the crossing's height.
 */
inline bool edge_observable(const ClippedComplex& level, const Simplex& e, const Point& v)
{
    const auto idx = crossing_vertex(level, e);
    if (!idx) return false;
    return jump_at(level.complex, v, dot(level.complex.points[*idx], v)) != 0;
}

inline bool edge_observable(const PLField& f, const Simplex& e, const Point& v, double t)
{
    return edge_observable(superlevel_restrict(f, t), e, v);
}

/// Uniform random direction within geodesic angle `radius` of `center`.
inline Point sample_direction_ball(const Point& center, double radius, int dim, Rng& rng)
{
    if (dim == 2) {
        const double a = std::atan2(center[1], center[0]) + (2.0 * rng.uniform() - 1.0) * radius;
        return {std::cos(a), std::sin(a), 0.0};
    }
    const double cos_r = std::cos(std::min(radius, std::numbers::pi));
    const double z = 1.0 - rng.uniform() * (1.0 - cos_r);
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    // Orthonormal frame (u, w, center).
    Point u = std::abs(center[0]) < 0.9 ? Point{1, 0, 0} : Point{0, 1, 0};
    const double proj = dot(u, center);
    u = {u[0] - proj * center[0], u[1] - proj * center[1], u[2] - proj * center[2]};
    const double lu = norm(u);
    u = {u[0] / lu, u[1] / lu, u[2] / lu};
    const Point w{center[1] * u[2] - center[2] * u[1], center[2] * u[0] - center[0] * u[2],
                  center[0] * u[1] - center[1] * u[0]};
    Point p;
    for (int a = 0; a < 3; ++a) p[a] = s * std::cos(phi) * u[a] + s * std::sin(phi) * w[a] + z * center[a];
    const double l = norm(p);
    return {p[0] / l, p[1] / l, p[2] / l};
}

enum class ObservabilityStatus { verified_sampled, violated, unknown };

inline std::string to_string(ObservabilityStatus s)
{
    switch (s) {
    case ObservabilityStatus::verified_sampled: return "verified_sampled";
    case ObservabilityStatus::violated: return "violated";
    case ObservabilityStatus::unknown: return "unknown";
    }
    return "?";
}

struct EdgeObservability {
    Simplex edge;
    ObservabilityStatus status = ObservabilityStatus::unknown;
    double t = 0;                 // the single threshold tested (edge midpoint value)
    std::optional<Point> center;  // witness ball centre when verified
};

struct ObservabilityOptions {
    double delta_k = 0.1;
    int n_samples = 16;  // directions per candidate ball
    int n_centers = 64;  // candidate ball centres (uniform circle / Fibonacci sphere)
    std::uint64_t seed = 0;
    int threads = 0;
};

/**
 * Sampled check of the direction-ball observability condition. Each
 * non-constant edge is tested at the single threshold halfway along it,
 * since observability does not depend on t inside the edge's value range.
 * An edge is verified_sampled when some candidate ball has every sampled
 * direction observing it, violated when no sampled direction at all does,
 * and unknown otherwise.
 */
inline std::vector<EdgeObservability> check_observability(const PLField& f, const ObservabilityOptions& opt)
{
    std::vector<Simplex> edges;
    for (const Simplex& e : f.simplices())
        if (e.n == 2 && f.values[e.v[0]] != f.values[e.v[1]]) edges.push_back(e);
    const DirectionSet centers = make_directions(f.dim(), opt.n_centers);
    std::vector<EdgeObservability> out(edges.size());
    parallel_for(edges.size(), opt.threads, [&](std::size_t ei) {
        const Simplex& e = edges[ei];
        EdgeObservability r;
        r.edge = e;
        r.t = 0.5 * (f.values[e.v[0]] + f.values[e.v[1]]);
        const ClippedComplex level = superlevel_restrict(f, r.t);
        Rng rng(derive_seed(opt.seed, ei));
        bool any = false;
        for (std::size_t c = 0; c < centers.size() && !r.center; ++c) {
            bool all = edge_observable(level, e, centers[c]);
            any = any || all;
            for (int s = 0; s < opt.n_samples; ++s) {
                const bool obs = edge_observable(level, e, sample_direction_ball(centers[c], opt.delta_k, f.dim(), rng));
                any = any || obs;
                all = all && obs;
            }
            if (all) r.center = centers[c];
        }
        r.status = r.center ? ObservabilityStatus::verified_sampled
                            : (any ? ObservabilityStatus::unknown : ObservabilityStatus::violated);
        out[ei] = r;
    });
    return out;
}

struct BoundResult {
    long long leading_term = 0;   // ceil(((d-1) k + 1) (1 + 3/delta)^d * floor(1/delta_B))
    double per_level = 0;         // ((d-1) k + 1) (1 + 3/delta)^d
    long long level_factor = 0;   // floor(1/delta_B)
    std::string note;
};

/// Explicit part of the bound on the number of Euler scans; the additive
/// O(d^(d+1) k^(2d) / delta^(2d(d-1))) term has no published constant and is not evaluated.
inline BoundResult delta_bound(const ModuliParams& p)
{
    validate(p);
    BoundResult r;
    // Guards against 1/(1/3) landing just below 3 in floating point.
    r.level_factor = (long long)std::floor((1.0 / p.delta_B) * (1.0 + 1e-12));
    r.per_level = ((p.d - 1) * double(p.k) + 1.0) * std::pow(1.0 + 3.0 / p.delta, p.d);
    r.leading_term = (long long)std::ceil(r.per_level * double(r.level_factor) * (1.0 - 1e-12));
    r.note = "leading term only; the O(d^(d+1) k^(2d) / delta^(2d(d-1))) term has an unspecified constant";
    return r;
}

enum class NeighborKind { dominating, dominated };

struct Neighbor {
    Simplex edge;
    NeighborKind kind;
    friend bool operator<(const Neighbor& a, const Neighbor& b) { return a.edge < b.edge; }
    friend bool operator==(const Neighbor& a, const Neighbor& b) { return a.edge == b.edge && a.kind == b.kind; }
};

/**
 * Combinatorial neighbours of a non-constant edge e = (x0, x1), f(x0) < f(x1):
 * for every triangle (x0, x1, x2),
 *   f(x0) < f(x2) < f(x1): (x0, x2) and (x2, x1), dominated;
 *   f(x2) < f(x0):         (x2, x1), dominating;
 *   f(x2) > f(x1):         (x0, x2), dominating.
 */
inline std::vector<Neighbor> combinatorial_neighbors(const PLField& f, const Simplex& e)
{
    if (e.n != 2) throw InputError("combinatorial_neighbors: expected an edge");
    Index x0 = e.v[0], x1 = e.v[1];
    if (f.values[x0] > f.values[x1]) std::swap(x0, x1);
    const double f0 = f.values[x0], f1 = f.values[x1];
    std::vector<Neighbor> out;
    if (f0 == f1) return out;
    for (const Simplex& t : f.simplices()) {
        if (t.n != 3 || !t.contains(x0) || !t.contains(x1)) continue;
        Index x2 = 0;
        for (Index v : t)
            if (v != x0 && v != x1) x2 = v;
        const double f2 = f.values[x2];
        if (f0 < f2 && f2 < f1) {
            out.push_back({Simplex{x0, x2}, NeighborKind::dominated});
            out.push_back({Simplex{x2, x1}, NeighborKind::dominated});
        } else if (f2 < f0) {
            out.push_back({Simplex{x2, x1}, NeighborKind::dominating});
        } else if (f2 > f1) {
            out.push_back({Simplex{x0, x2}, NeighborKind::dominating});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) { return a.edge == b.edge; }),
              out.end());
    return out;
}

/**
 * Superlevel neighbours found by inspecting superlevel sets: e' is a
 * neighbour when, for some t, the crossing points of e and e' are joined by
 * an edge of the clipped complex. One t between each pair of consecutive
 * distinct vertex values suffices, since the clipped combinatorics is
 * constant there.
 */
inline std::vector<Simplex> superlevel_neighbors(const PLField& f, const Simplex& e)
{
    if (e.n != 2) throw InputError("superlevel_neighbors: expected an edge");
    const double lo = std::min(f.values[e.v[0]], f.values[e.v[1]]);
    const double hi = std::max(f.values[e.v[0]], f.values[e.v[1]]);
    std::vector<double> vals = f.values;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<Simplex> out;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const double t = 0.5 * (vals[i] + vals[i + 1]);
        if (!(t > lo && t < hi) || !(t > 0.0 && t <= 1.0)) continue;
        const ClippedComplex c = superlevel_restrict(f, t);
        const auto p = crossing_vertex(c, e);
        if (!p) continue;
        for (const Simplex& s : c.simplices()) {
            if (s.n != 2 || !s.contains(*p)) continue;
            const Index q = s.v[0] == *p ? s.v[1] : s.v[0];
            const Provenance& pr = c.provenance[q];
            if (pr.is_original()) continue;
            out.push_back(Simplex{pr.a, pr.b});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct ClassReport {
    bool cond1 = true;  // PL on a compact complex, values in [0, 1]
    GapResult cond2;
    ObservabilityStatus cond3 = ObservabilityStatus::unknown;
    std::optional<Simplex> cond3_witness;
    std::size_t cond4_max_jumps = 0;
    bool cond4 = true;
    std::string overall = "unknown";  // pass / fail / unknown
    std::vector<EdgeObservability> edges;
};

/// Checks the four membership conditions of the field class on sampled axes.
inline ClassReport verify_class(const PLField& f, const ModuliParams& p, const DirectionSet& dirs,
                                const std::vector<double>& thresholds, const ObservabilityOptions& obs)
{
    validate(p);
    ClassReport r;
    validate_field(f);
    for (double v : f.values) r.cond1 = r.cond1 && v >= 0.0 && v <= 1.0;
    r.cond2 = check_gap_condition(f, p.delta_B);
    ObservabilityOptions o = obs;
    o.delta_k = p.delta_k;
    r.edges = check_observability(f, o);
    r.cond3 = ObservabilityStatus::verified_sampled;
    for (const auto& e : r.edges) {
        if (e.status == ObservabilityStatus::violated) {
            r.cond3 = ObservabilityStatus::violated;
            r.cond3_witness = e.edge;
            break;
        }
        if (e.status == ObservabilityStatus::unknown && r.cond3 == ObservabilityStatus::verified_sampled) {
            r.cond3 = ObservabilityStatus::unknown;
            r.cond3_witness = e.edge;
        }
    }
    r.cond4_max_jumps = max_jump_count(f, dirs, thresholds, obs.threads).max_jumps;
    r.cond4 = r.cond4_max_jumps <= std::size_t(p.k);
    if (!r.cond1 || !r.cond2.pass || !r.cond4 || r.cond3 == ObservabilityStatus::violated) r.overall = "fail";
    else if (r.cond3 == ObservabilityStatus::unknown) r.overall = "unknown";
    else r.overall = "pass";
    return r;
}

}  // namespace lect

#endif  // LECT_MODULI_HPP
