#ifndef LECT_COMPLEX_HPP
#define LECT_COMPLEX_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "field.hpp"
#include "geometry.hpp"

namespace lect {

/// Alternating simplex count. The empty complex has characteristic 0.
inline long long euler_characteristic(const std::vector<Simplex>& simplices)
{
    long long chi = 0;
    for (const Simplex& s : simplices) chi += s.sign();
    return chi;
}

inline long long euler_characteristic(const Complex& k) { return euler_characteristic(k.simplices); }

/**
 * Integer-valued function on the open cells of a finite complex. A finite set
 * is the special case where every cell is a vertex.
 */
struct ConstructibleFunction {
    std::vector<Simplex> cells;  // sorted
    std::vector<long long> values;

    long long value(const Simplex& s) const
    {
        auto it = std::lower_bound(cells.begin(), cells.end(), s);
        return (it != cells.end() && *it == s) ? values[it - cells.begin()] : 0;
    }
};

inline ConstructibleFunction make_cf(std::vector<std::pair<Simplex, long long>> entries)
{
    std::sort(entries.begin(), entries.end());
    ConstructibleFunction phi;
    for (auto& [s, v] : entries) {
        if (!phi.cells.empty() && phi.cells.back() == s) throw InputError("duplicate cell in constructible function");
        phi.cells.push_back(s);
        phi.values.push_back(v);
    }
    return phi;
}

/// Indicator function of a closed complex (value 1 on every cell).
inline ConstructibleFunction indicator(const std::vector<Simplex>& cells)
{
    ConstructibleFunction phi;
    phi.cells = cells;
    std::sort(phi.cells.begin(), phi.cells.end());
    phi.values.assign(phi.cells.size(), 1);
    return phi;
}

/**
 * Euler integral: sum over the non-empty level sets of n * chi(phi^-1(n)).
 * Each level set is a union of open cells, whose Euler characteristic is the
 * alternating count of those cells.
 */
inline long long euler_integral(const ConstructibleFunction& phi)
{
    std::map<long long, long long> level_chi;
    for (std::size_t i = 0; i < phi.cells.size(); ++i) level_chi[phi.values[i]] += phi.cells[i].sign();
    long long total = 0;
    for (const auto& [n, chi] : level_chi) total += n * chi;
    return total;
}

/// Origin of a clipped-complex vertex: an input vertex (a == b, s == 0) or the
/// point a + s (b - a) on input edge (a, b), a < b.
struct Provenance {
    Index a = 0;
    Index b = 0;
    double s = 0.0;

    bool is_original() const { return a == b; }
};

/// Result of intersecting a complex with a superlevel, level or half-space region.
struct ClippedComplex {
    Complex complex;
    std::vector<Provenance> provenance;  // relative to the clipped input
    std::vector<double> values;          // carried field values, when available

    const std::vector<Point>& points() const { return complex.points; }
    const std::vector<Simplex>& simplices() const { return complex.simplices; }
    bool empty() const { return complex.simplices.empty(); }
};

enum class ClipMode { at_least, at_most, equal };

namespace detail {

using VKey = std::uint64_t;

inline VKey vkey(Index a, Index b)
{
    if (a > b) std::swap(a, b);
    return (VKey(a) << 32) | VKey(b);
}

struct KeySimplex {
    std::uint8_t n = 0;
    std::array<VKey, 4> k{};
};

/**
 * Pulling triangulation of the polytope tau ∩ {g >= c} (or tau ∩ {g == c}),
 * where only the sign of g - c at each vertex of tau matters. Polytope
 * vertices are keyed by the input vertex or the input edge they lie on, and
 * the pulling apex is always the smallest key, so a shared face is
 * triangulated the same way from both sides.
 */
class Puller {
public:
    explicit Puller(const std::vector<signed char>& sign) : sign_(sign) {}

    void pull(const Simplex& tau, bool eq, std::vector<KeySimplex>& out) const
    {
        const int d = polytope_dim(tau, eq);
        if (d < 0) return;
        std::array<VKey, 8> verts;
        const int nv = polytope_vertices(tau, eq, verts);
        if (nv == d + 1) {
            KeySimplex ks;
            for (int i = 0; i < nv; ++i) ks.k[ks.n++] = verts[i];
            out.push_back(ks);
            return;
        }
        const VKey apex = verts[0];
        std::vector<std::pair<Simplex, bool>> facets;
        std::vector<std::array<VKey, 8>> seen;
        std::vector<int> seen_n;
        auto consider = [&](const Simplex& face, bool face_eq) {
            if (polytope_dim(face, face_eq) != d - 1) return;
            std::array<VKey, 8> fv;
            const int fn = polytope_vertices(face, face_eq, fv);
            if (std::find(fv.begin(), fv.begin() + fn, apex) != fv.begin() + fn) return;
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (seen_n[i] == fn && std::equal(fv.begin(), fv.begin() + fn, seen[i].begin())) return;
            seen.push_back(fv);
            seen_n.push_back(fn);
            facets.emplace_back(face, face_eq);
        };
        const unsigned full = (1u << tau.n) - 1;
        for (int k = 0; k < tau.n; ++k) consider(tau.face(full & ~(1u << k)), eq);
        if (!eq) consider(tau, true);
        std::vector<KeySimplex> sub;
        for (const auto& [face, face_eq] : facets) {
            sub.clear();
            pull(face, face_eq, sub);
            for (KeySimplex ks : sub) {
                ks.k[ks.n++] = apex;
                std::sort(ks.k.begin(), ks.k.begin() + ks.n);
                out.push_back(ks);
            }
        }
    }

    int polytope_dim(const Simplex& tau, bool eq) const
    {
        int pos = 0, neg = 0, zero = 0;
        count(tau, pos, neg, zero);
        if (!eq) return pos > 0 ? tau.dim() : zero - 1;
        if (pos > 0 && neg > 0) return tau.dim() - 1;
        if (zero == tau.n) return tau.dim();
        return zero - 1;
    }

    int polytope_vertices(const Simplex& tau, bool eq, std::array<VKey, 8>& out) const
    {
        int n = 0;
        for (int i = 0; i < tau.n; ++i) {
            const signed char s = sign_[tau.v[i]];
            if (s == 0 || (!eq && s > 0)) out[n++] = vkey(tau.v[i], tau.v[i]);
        }
        for (int i = 0; i < tau.n; ++i)
            for (int j = i + 1; j < tau.n; ++j)
                if (sign_[tau.v[i]] * sign_[tau.v[j]] < 0) out[n++] = vkey(tau.v[i], tau.v[j]);
        std::sort(out.begin(), out.begin() + n);
        return n;
    }

private:
    void count(const Simplex& tau, int& pos, int& neg, int& zero) const
    {
        for (int i = 0; i < tau.n; ++i) {
            const signed char s = sign_[tau.v[i]];
            if (s > 0) ++pos;
            else if (s < 0) ++neg;
            else ++zero;
        }
    }

    const std::vector<signed char>& sign_;
};

}  // namespace detail

/**
 * Intersects the complex with {g >= c}, {g <= c} or {g == c} where g is the
 * linear interpolation of the per-vertex values `g`. Exact hits g == c count
 * as inside. New vertices are identified by the input edge they lie on, never
 * by their coordinates. `carry`, when non-null, is interpolated onto the new
 * vertices.
 */
inline ClippedComplex clip_complex(const Complex& k, const std::vector<double>& g, double c, ClipMode mode,
                                   const std::vector<double>* carry = nullptr)
{
    using detail::KeySimplex;
    using detail::VKey;
    if (g.size() != k.points.size()) throw InputError("clip_complex: one value per vertex required");

    std::vector<signed char> sign(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = (mode == ClipMode::at_most) ? c - g[i] : g[i] - c;
        sign[i] = x > 0 ? 1 : (x < 0 ? -1 : 0);
    }
    const bool eq = (mode == ClipMode::equal);
    detail::Puller puller(sign);

    std::vector<KeySimplex> cells;
    for (const Simplex& s : maximal_simplices(k.simplices)) {
        int pos = 0, neg = 0, zero = 0;
        for (Index v : s) {
            if (sign[v] > 0) ++pos;
            else if (sign[v] < 0) ++neg;
            else ++zero;
        }
        const bool whole = eq ? (zero == s.n) : (neg == 0);
        const bool none = eq ? (zero == 0 && (pos == 0 || neg == 0)) : (neg == s.n);
        if (none) continue;
        if (whole) {
            KeySimplex ks;
            for (Index v : s) ks.k[ks.n++] = detail::vkey(v, v);
            cells.push_back(ks);
            continue;
        }
        puller.pull(s, eq, cells);
    }

    std::vector<VKey> keys;
    for (const KeySimplex& ks : cells) keys.insert(keys.end(), ks.k.begin(), ks.k.begin() + ks.n);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    ClippedComplex out;
    out.complex.dim = k.dim;
    out.complex.points.reserve(keys.size());
    out.provenance.reserve(keys.size());
    if (carry) out.values.reserve(keys.size());
    for (VKey key : keys) {
        const Index a = Index(key >> 32), b = Index(key & 0xffffffffu);
        Provenance p{a, b, 0.0};
        if (a != b) p.s = (c - g[a]) / (g[b] - g[a]);
        out.provenance.push_back(p);
        out.complex.points.push_back(a == b ? k.points[a] : lerp(k.points[a], k.points[b], p.s));
        if (carry) {
            const auto& cv = *carry;
            out.values.push_back(a == b ? cv[a] : cv[a] + p.s * (cv[b] - cv[a]));
        }
    }

    std::vector<Simplex> tops;
    tops.reserve(cells.size());
    for (const KeySimplex& ks : cells) {
        Simplex s;
        for (int i = 0; i < ks.n; ++i)
            s.v[s.n++] = Index(std::lower_bound(keys.begin(), keys.end(), ks.k[i]) - keys.begin());
        std::sort(s.v.begin(), s.v.begin() + s.n);
        tops.push_back(s);
    }
    out.complex.simplices = close_simplices(tops);
    return out;
}

inline void check_threshold(double t)
{
    if (!(t > 0.0 && t <= 1.0)) throw InputError("threshold must lie in (0, 1]");
}

/// Closed superlevel set {f >= t} as a triangulated complex.
inline ClippedComplex superlevel_restrict(const PLField& f, double t)
{
    check_threshold(t);
    return clip_complex(f.complex, f.values, t, ClipMode::at_least, &f.values);
}

/// Level set {f == t}; simplices on which f is constantly t are kept whole.
inline ClippedComplex level_restrict(const PLField& f, double t)
{
    check_threshold(t);
    return clip_complex(f.complex, f.values, t, ClipMode::equal, &f.values);
}

inline std::vector<double> heights_of(const std::vector<Point>& pts, const Point& v)
{
    std::vector<double> h(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) h[i] = dot(pts[i], v);
    return h;
}

/// Part of the complex in the closed half-space {x . v <= h}.
inline ClippedComplex halfspace_clip(const Complex& k, const Point& v, double h,
                                     const std::vector<double>* carry = nullptr)
{
    if (std::abs(norm(v) - 1.0) > 1e-9) throw InputError("halfspace_clip: direction must be a unit vector");
    return clip_complex(k, heights_of(k.points, v), h, ClipMode::at_most, carry);
}

inline ClippedComplex halfspace_clip(const ClippedComplex& k, const Point& v, double h)
{
    return halfspace_clip(k.complex, v, h, k.values.empty() ? nullptr : &k.values);
}

/// Wraps a complex as a trivially clipped one (every vertex original).
inline ClippedComplex as_clipped(const Complex& k, const std::vector<double>* values = nullptr)
{
    ClippedComplex c;
    c.complex = k;
    c.provenance.resize(k.points.size());
    for (std::size_t i = 0; i < k.points.size(); ++i) c.provenance[i] = {Index(i), Index(i), 0.0};
    if (values) c.values = *values;
    return c;
}

inline void dump(std::ostream& os, const ClippedComplex& c)
{
    os << "CLIPPED " << c.complex.dim << " " << c.complex.points.size() << " " << c.complex.simplices.size()
       << "\n";
    for (std::size_t i = 0; i < c.complex.points.size(); ++i) {
        const Point& p = c.complex.points[i];
        os << i << " " << p[0] << " " << p[1] << " " << p[2];
        if (i < c.provenance.size())
            os << " from " << c.provenance[i].a << " " << c.provenance[i].b << " " << c.provenance[i].s;
        os << "\n";
    }
    for (const Simplex& s : c.complex.simplices) {
        os << s.dim();
        for (Index v : s) os << " " << v;
        os << "\n";
    }
}

}  // namespace lect

#endif  // LECT_COMPLEX_HPP
