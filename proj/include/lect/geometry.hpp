#ifndef LECT_GEOMETRY_HPP
#define LECT_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace lect {

/// Input that violates a documented precondition.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A structural invariant failed (non-closed complex, bad axes, ...).
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Points live in R^3; two-dimensional data keeps z = 0.
using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point lerp(const Point& a, const Point& b, double s)
{
    return {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]), a[2] + s * (b[2] - a[2])};
}

using Index = std::uint32_t;

/**
 * A simplex of dimension 0..3 stored as a sorted list of at most four vertex
 * indices. Ordering is by vertex count first, then lexicographic, so sorted
 * simplex lists enumerate vertices, then edges, then triangles, ...
 */
struct Simplex {
    std::uint8_t n = 0;
    std::array<Index, 4> v{};

    Simplex() = default;
    Simplex(std::initializer_list<Index> ids)
    {
        if (ids.size() == 0 || ids.size() > 4)
            throw InputError("simplex must have 1..4 vertices");
        for (Index i : ids) v[n++] = i;
        std::sort(v.begin(), v.begin() + n);
    }

    template <typename It>
    static Simplex from_range(It first, It last)
    {
        Simplex s;
        for (; first != last; ++first) {
            if (s.n == 4) throw InputError("simplex must have 1..4 vertices");
            s.v[s.n++] = static_cast<Index>(*first);
        }
        if (s.n == 0) throw InputError("simplex must have 1..4 vertices");
        std::sort(s.v.begin(), s.v.begin() + s.n);
        return s;
    }

    int dim() const { return int(n) - 1; }
    int sign() const { return (n % 2 == 1) ? 1 : -1; }
    const Index* begin() const { return v.data(); }
    const Index* end() const { return v.data() + n; }
    Index operator[](std::size_t i) const { return v[i]; }

    bool contains(Index i) const { return std::find(begin(), end(), i) != end(); }

    /// Face spanned by the vertices selected in `mask` (bit k keeps v[k]).
    Simplex face(unsigned mask) const
    {
        Simplex f;
        for (int k = 0; k < n; ++k)
            if (mask & (1u << k)) f.v[f.n++] = v[k];
        return f;
    }

    friend auto operator<=>(const Simplex&, const Simplex&) = default;
    friend bool operator==(const Simplex&, const Simplex&) = default;
};

/// Sorted, duplicate-free closure of a list of simplices under taking faces.
inline std::vector<Simplex> close_simplices(const std::vector<Simplex>& cells)
{
    std::vector<Simplex> out;
    out.reserve(cells.size() * 4);
    for (const Simplex& s : cells) {
        const unsigned full = (1u << s.n) - 1;
        for (unsigned mask = 1; mask <= full; ++mask) out.push_back(s.face(mask));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Simplices of `sorted` that are not a proper face of any other listed simplex.
inline std::vector<Simplex> maximal_simplices(const std::vector<Simplex>& sorted)
{
    std::vector<char> covered(sorted.size(), 0);
    for (const Simplex& s : sorted) {
        if (s.n < 2) continue;
        const unsigned full = (1u << s.n) - 1;
        for (int k = 0; k < s.n; ++k) {
            const Simplex f = s.face(full & ~(1u << k));
            auto it = std::lower_bound(sorted.begin(), sorted.end(), f);
            if (it != sorted.end() && *it == f) covered[it - sorted.begin()] = 1;
        }
    }
    std::vector<Simplex> out;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (!covered[i]) out.push_back(sorted[i]);
    return out;
}

/// A finite geometric simplicial complex embedded in R^dim.
struct Complex {
    int dim = 3;
    std::vector<Point> points;
    std::vector<Simplex> simplices;  // sorted, closed

    bool empty() const { return simplices.empty(); }
};

/// Returns the first missing face, or std::nullopt-like empty simplex if closed.
inline bool find_missing_face(const std::vector<Simplex>& sorted, Simplex& missing)
{
    for (const Simplex& s : sorted) {
        if (s.n < 2) continue;
        const unsigned full = (1u << s.n) - 1;
        for (int k = 0; k < s.n; ++k) {
            const Simplex f = s.face(full & ~(1u << k));
            if (!std::binary_search(sorted.begin(), sorted.end(), f)) {
                missing = f;
                return true;
            }
        }
    }
    return false;
}

inline bool is_closed(const std::vector<Simplex>& sorted)
{
    Simplex dummy;
    return !find_missing_face(sorted, dummy);
}

/// Edges (1-simplices) of a sorted simplex list.
inline std::vector<Simplex> edges_of(const std::vector<Simplex>& sorted)
{
    std::vector<Simplex> out;
    for (const Simplex& s : sorted)
        if (s.n == 2) out.push_back(s);
    return out;
}

}  // namespace lect

#endif  // LECT_GEOMETRY_HPP
