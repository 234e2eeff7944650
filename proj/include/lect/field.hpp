#ifndef LECT_FIELD_HPP
#define LECT_FIELD_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace lect {

/**
 * Piecewise-linear scalar field: one value per vertex of a closed simplicial
 * complex, linearly interpolated over every simplex.
 */
struct PLField {
    Complex complex;
    std::vector<double> values;
    Point box_lo{0, 0, 0};
    Point box_hi{0, 0, 0};

    int dim() const { return complex.dim; }
    std::size_t num_vertices() const { return complex.points.size(); }
    const std::vector<Point>& points() const { return complex.points; }
    const std::vector<Simplex>& simplices() const { return complex.simplices; }
};

inline void compute_bounding_box(PLField& f)
{
    Point lo{0, 0, 0}, hi{0, 0, 0};
    if (!f.complex.points.empty()) {
        lo = hi = f.complex.points.front();
        for (const Point& p : f.complex.points)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], p[a]);
                hi[a] = std::max(hi[a], p[a]);
            }
    }
    f.box_lo = lo;
    f.box_hi = hi;
}

/// Checks the PLField invariants; throws InvariantError on the first violation.
inline void validate_field(const PLField& f)
{
    const int d = f.complex.dim;
    if (d != 2 && d != 3) throw InvariantError("field dimension must be 2 or 3");
    if (f.values.size() != f.complex.points.size())
        throw InvariantError("one value per vertex required");
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (!std::isfinite(f.values[i]))
            throw InvariantError("non-finite value at vertex " + std::to_string(i));
        for (int a = 0; a < 3; ++a)
            if (!std::isfinite(f.complex.points[i][a]))
                throw InvariantError("non-finite coordinate at vertex " + std::to_string(i));
        if (d == 2 && f.complex.points[i][2] != 0.0)
            throw InvariantError("2D field with non-zero z coordinate");
    }
    const auto& s = f.complex.simplices;
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InvariantError("simplex list must be sorted and duplicate-free");
    for (const Simplex& c : s) {
        if (c.dim() > d) throw InvariantError("simplex dimension exceeds ambient dimension");
        for (int k = 0; k < c.n; ++k) {
            if (c.v[k] >= f.values.size()) throw InvariantError("simplex vertex index out of range");
            if (k > 0 && c.v[k] == c.v[k - 1]) throw InvariantError("repeated vertex in simplex");
        }
    }
    Simplex missing;
    if (find_missing_face(s, missing)) throw InvariantError("complex not closed");
}

/// Builds a field from raw parts, closing nothing: closure is verified.
inline PLField make_field(int dim, std::vector<Point> points, std::vector<double> values,
                          std::vector<Simplex> simplices)
{
    PLField f;
    f.complex.dim = dim;
    f.complex.points = std::move(points);
    f.values = std::move(values);
    std::sort(simplices.begin(), simplices.end());
    simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());
    f.complex.simplices = std::move(simplices);
    compute_bounding_box(f);
    validate_field(f);
    return f;
}

/// Same as make_field, but adds every missing face first.
inline PLField make_closed_field(int dim, std::vector<Point> points, std::vector<double> values,
                                 const std::vector<Simplex>& top_cells)
{
    return make_field(dim, std::move(points), std::move(values), close_simplices(top_cells));
}

/// Regular grid of samples, x fastest. A grid with nz == 1 is treated as a 2D image.
struct VoxelGrid {
    std::array<int, 3> dims{1, 1, 1};
    Point origin{0, 0, 0};
    Point spacing{1, 1, 1};
    std::vector<double> values;

    std::size_t size() const { return std::size_t(dims[0]) * dims[1] * dims[2]; }
    std::size_t index(int i, int j, int k) const
    {
        return std::size_t(i) + std::size_t(dims[0]) * (std::size_t(j) + std::size_t(dims[1]) * k);
    }
    double& at(int i, int j, int k) { return values[index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[index(i, j, k)]; }
    Point position(int i, int j, int k) const
    {
        return {origin[0] + i * spacing[0], origin[1] + j * spacing[1], origin[2] + k * spacing[2]};
    }
    int dim() const { return dims[2] == 1 ? 2 : 3; }
};

inline void validate_grid(const VoxelGrid& g)
{
    for (int a = 0; a < 3; ++a) {
        if (g.dims[a] < 1) throw InvariantError("grid dimensions must be positive");
        if (!(g.spacing[a] > 0)) throw InvariantError("grid spacing must be strictly positive");
    }
    if (g.values.size() != g.size()) throw InvariantError("grid value count does not match dims");
    for (double v : g.values)
        if (!std::isfinite(v)) throw InvariantError("non-finite grid value");
}

/**
 * Freudenthal (Kuhn) triangulation of a voxel grid. Every cube is split into
 * d! simplices, one per axis permutation, walking from the cube's lowest
 * corner to its highest. Since the walk only increases global vertex indices,
 * neighbouring cubes triangulate their shared faces identically.
 */
inline PLField voxel_to_pl(const VoxelGrid& g)
{
    validate_grid(g);
    const int d = g.dim();
    for (int a = 0; a < d; ++a)
        if (g.dims[a] < 2) throw InputError("voxel_to_pl needs at least 2 samples per axis");

    std::vector<Point> pts;
    pts.reserve(g.size());
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i) {
                Point p = g.position(i, j, k);
                if (d == 2) p[2] = 0.0;
                pts.push_back(p);
            }

    const std::array<std::size_t, 3> stride{1, std::size_t(g.dims[0]),
                                            std::size_t(g.dims[0]) * g.dims[1]};
    std::vector<std::array<int, 3>> perms;
    if (d == 2) {
        perms = {{0, 1, 2}, {1, 0, 2}};
    } else {
        std::array<int, 3> p{0, 1, 2};
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
    }

    std::vector<Simplex> tops;
    const int kmax = (d == 2) ? 1 : g.dims[2] - 1;
    for (int k = 0; k < kmax; ++k)
        for (int j = 0; j + 1 < g.dims[1]; ++j)
            for (int i = 0; i + 1 < g.dims[0]; ++i) {
                const std::size_t base = g.index(i, j, k);
                for (const auto& p : perms) {
                    Simplex s;
                    std::size_t cur = base;
                    s.v[s.n++] = Index(cur);
                    for (int step = 0; step < d; ++step) {
                        cur += stride[p[step]];
                        s.v[s.n++] = Index(cur);
                    }
                    tops.push_back(s);
                }
            }
    PLField f;
    f.complex.dim = d;
    f.complex.points = std::move(pts);
    f.complex.simplices = close_simplices(tops);
    f.values = g.values;
    compute_bounding_box(f);
    return f;
}

enum class NormalizeMode { per_field, global };

struct NormalizeOptions {
    NormalizeMode mode = NormalizeMode::per_field;
    // Global affine range used when mode == global: v -> (v - lo) / (hi - lo).
    double lo = 0.0;
    double hi = 1.0;
    // Also map the bounding box into [-1, 1]^d (uniform scale about its centre).
    bool rescale_geometry = false;
};

struct NormalizeResult {
    PLField field;
    bool constant = false;  // per-field range was zero; values were set to 0
};

inline NormalizeResult normalize_field(const PLField& f, const NormalizeOptions& opt = {})
{
    if (f.values.empty()) throw InputError("normalize_field: field has no vertices");
    NormalizeResult r{f, false};
    double lo = opt.lo, hi = opt.hi;
    if (opt.mode == NormalizeMode::per_field) {
        auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
        lo = *mn;
        hi = *mx;
    }
    if (!(hi > lo)) {
        if (opt.mode == NormalizeMode::global) throw InputError("normalize_field: empty global range");
        std::fill(r.field.values.begin(), r.field.values.end(), 0.0);
        r.constant = true;
    } else {
        const double scale = hi - lo;
        for (double& v : r.field.values) v = std::clamp((v - lo) / scale, 0.0, 1.0);
    }
    if (opt.rescale_geometry) {
        const int d = f.dim();
        Point c{0, 0, 0};
        double half = 0;
        for (int a = 0; a < d; ++a) {
            c[a] = 0.5 * (f.box_lo[a] + f.box_hi[a]);
            half = std::max(half, 0.5 * (f.box_hi[a] - f.box_lo[a]));
        }
        if (half > 0)
            for (Point& p : r.field.complex.points)
                for (int a = 0; a < d; ++a) p[a] = (p[a] - c[a]) / half;
        compute_bounding_box(r.field);
    }
    return r;
}

enum class DirectionScheme { uniform_circle, fibonacci_sphere, explicit_list };

struct DirectionSet {
    int dim = 3;
    std::vector<Point> directions;
    DirectionScheme scheme = DirectionScheme::explicit_list;

    std::size_t size() const { return directions.size(); }
    const Point& operator[](std::size_t i) const { return directions[i]; }
};

/**
 * Point 2*pi*j/n on the unit circle. The angle is reduced to the first octant
 * with integer arithmetic so that the set {v_j} is exactly closed under the
 * dihedral symmetries it should have (quarter turns when 4 | n, diagonal
 * reflections when 8 | n).
 */
inline Point unit_circle_point(long long j, long long n)
{
    long long k = ((j % n) + n) % n;
    const long long q = (4 * k) / n;
    const long long r = 4 * k - q * n;  // angle inside the quadrant = (pi/2) * r / n
    double c, s;
    if (r == 0) {
        c = 1.0;
        s = 0.0;
    } else if (2 * r == n) {
        c = s = std::sqrt(0.5);
    } else if (2 * r < n) {
        const double a = 0.5 * std::numbers::pi * double(r) / double(n);
        c = std::cos(a);
        s = std::sin(a);
    } else {
        const double a = 0.5 * std::numbers::pi * double(n - r) / double(n);
        c = std::sin(a);
        s = std::cos(a);
    }
    for (long long t = 0; t < q; ++t) {
        const double nc = -s;
        s = c;
        c = nc;
    }
    return {c, s, 0.0};
}

inline DirectionSet make_directions(int dim, int n)
{
    if (n < 1) throw InputError("make_directions: n must be positive");
    DirectionSet ds;
    ds.dim = dim;
    if (dim == 2) {
        ds.scheme = DirectionScheme::uniform_circle;
        for (int j = 0; j < n; ++j) ds.directions.push_back(unit_circle_point(j, n));
    } else if (dim == 3) {
        ds.scheme = DirectionScheme::fibonacci_sphere;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < n; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / n;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            Point p{r * std::cos(phi), r * std::sin(phi), z};
            const double l = norm(p);
            ds.directions.push_back({p[0] / l, p[1] / l, p[2] / l});
        }
    } else {
        throw InputError("make_directions: dim must be 2 or 3");
    }
    return ds;
}

inline DirectionSet explicit_directions(int dim, std::vector<Point> dirs)
{
    DirectionSet ds;
    ds.dim = dim;
    ds.scheme = DirectionScheme::explicit_list;
    for (Point& p : dirs) {
        const double l = norm(p);
        if (!(l > 0)) throw InputError("zero direction vector");
        ds.directions.push_back({p[0] / l, p[1] / l, p[2] / l});
    }
    return ds;
}

enum class TransformKind { SELECT, LECT, ECT };

inline std::string to_string(TransformKind k)
{
    switch (k) {
    case TransformKind::SELECT: return "SELECT";
    case TransformKind::LECT: return "LECT";
    case TransformKind::ECT: return "ECT";
    }
    return "?";
}

inline TransformKind kind_from_string(const std::string& s)
{
    if (s == "SELECT") return TransformKind::SELECT;
    if (s == "LECT") return TransformKind::LECT;
    if (s == "ECT") return TransformKind::ECT;
    throw InputError("unknown transform kind: " + s);
}

/// Dense integer transform values indexed (direction, height, threshold).
struct TransformGrid {
    TransformKind kind = TransformKind::SELECT;
    DirectionSet directions;
    std::vector<double> heights;
    std::vector<double> thresholds;
    std::vector<std::int32_t> values;

    std::size_t num_directions() const { return directions.size(); }
    std::size_t num_heights() const { return heights.size(); }
    std::size_t num_thresholds() const { return thresholds.size(); }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const
    {
        return (i * heights.size() + j) * thresholds.size() + k;
    }
    std::int32_t at(std::size_t i, std::size_t j, std::size_t k) const { return values[index(i, j, k)]; }
    std::int32_t& at(std::size_t i, std::size_t j, std::size_t k) { return values[index(i, j, k)]; }

    void allocate() { values.assign(directions.size() * heights.size() * thresholds.size(), 0); }
};

/// Right-continuous integer step function of height; 0 before the first jump.
struct EulerCurve {
    std::vector<std::pair<double, int>> jumps;  // (height, value from this height on)
    int initial_value = 0;

    int value_at(double h) const
    {
        auto it = std::upper_bound(jumps.begin(), jumps.end(), h,
                                   [](double x, const std::pair<double, int>& j) { return x < j.first; });
        if (it == jumps.begin()) return initial_value;
        return std::prev(it)->second;
    }
    int final_value() const { return jumps.empty() ? initial_value : jumps.back().second; }
    std::size_t num_jumps() const { return jumps.size(); }

    std::vector<int> sample(const std::vector<double>& heights) const
    {
        std::vector<int> out;
        out.reserve(heights.size());
        for (double h : heights) out.push_back(value_at(h));
        return out;
    }
};

}  // namespace lect

#endif  // LECT_FIELD_HPP
