#ifndef LECT_CF_CALCULUS_HPP
#define LECT_CF_CALCULUS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "complex.hpp"

// Euler calculus on finite models. On a finite discrete set every fibre is a
// finite set of points, so its Euler characteristic is its cardinality and
// integrals against chi become weighted counts.

namespace lect::cf {

/// Constructible function on the finite set {0, ..., n-1}.
using Function = std::vector<long long>;

/// Total map X -> Y between finite sets, given as image indices.
using Map = std::vector<std::size_t>;

inline Function add(const Function& a, const Function& b)
{
    if (a.size() != b.size()) throw InputError("cf: domain mismatch");
    Function c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

inline Function multiply(const Function& a, const Function& b)
{
    if (a.size() != b.size()) throw InputError("cf: domain mismatch");
    Function c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
    return c;
}

inline Function indicator(std::size_t n, std::size_t at)
{
    if (at >= n) throw InputError("cf: indicator point outside domain");
    Function f(n, 0);
    f[at] = 1;
    return f;
}

/// Integral against chi over a finite set.
inline long long integral(const Function& phi)
{
    long long s = 0;
    for (long long v : phi) s += v;
    return s;
}

inline void check_map(const Map& f, std::size_t ny)
{
    for (std::size_t y : f)
        if (y >= ny) throw InputError("cf: map image out of range");
}

/// (f^* phi)(x) = phi(f(x)).
inline Function pullback(const Function& phi_y, const Map& f)
{
    check_map(f, phi_y.size());
    Function out(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) out[x] = phi_y[f[x]];
    return out;
}

/// (f_* phi)(y) = integral of phi over the fibre f^-1(y).
inline Function pushforward(const Function& phi_x, const Map& f, std::size_t ny)
{
    if (phi_x.size() != f.size()) throw InputError("cf: function and map domains differ");
    check_map(f, ny);
    Function out(ny, 0);
    for (std::size_t x = 0; x < f.size(); ++x) out[f[x]] += phi_x[x];
    return out;
}

/**
 * Pushforward of a constructible function on the open cells of a complex
 * along a cell-wise map to a finite set: each fibre is a union of open cells
 * and is integrated with euler_integral.
 */
inline Function pushforward(const ConstructibleFunction& phi, const Map& cell_to_y, std::size_t ny)
{
    if (phi.cells.size() != cell_to_y.size()) throw InputError("cf: one image per cell required");
    check_map(cell_to_y, ny);
    std::vector<ConstructibleFunction> fibres(ny);
    for (std::size_t i = 0; i < phi.cells.size(); ++i) {
        fibres[cell_to_y[i]].cells.push_back(phi.cells[i]);
        fibres[cell_to_y[i]].values.push_back(phi.values[i]);
    }
    Function out(ny, 0);
    for (std::size_t y = 0; y < ny; ++y) out[y] = euler_integral(fibres[y]);
    return out;
}

/// Incidence relation S ⊂ X x Y.
struct Kernel {
    std::size_t nx = 0, ny = 0;
    std::vector<char> incidence;  // x * ny + y

    Kernel() = default;
    Kernel(std::size_t x, std::size_t y) : nx(x), ny(y), incidence(x * y, 0) {}

    bool contains(std::size_t x, std::size_t y) const { return incidence[x * ny + y] != 0; }
    void set(std::size_t x, std::size_t y, bool on = true) { incidence[x * ny + y] = on ? 1 : 0; }

    /// S^T ⊂ Y x X.
    Kernel transposed() const
    {
        Kernel t(ny, nx);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) t.set(y, x, contains(x, y));
        return t;
    }
};

inline Kernel diagonal_kernel(std::size_t n)
{
    Kernel k(n, n);
    for (std::size_t i = 0; i < n; ++i) k.set(i, i);
    return k;
}

inline Kernel full_kernel(std::size_t nx, std::size_t ny)
{
    Kernel k(nx, ny);
    std::fill(k.incidence.begin(), k.incidence.end(), 1);
    return k;
}

/// Point-line incidence of the projective plane of order 2 (7 points, 7 lines).
inline Kernel fano_kernel()
{
    static const int lines[7][3] = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
    Kernel k(7, 7);
    for (std::size_t l = 0; l < 7; ++l)
        for (int p : lines[l]) k.set(std::size_t(p), l);
    return k;
}

/**
 * Radon transform R_S phi = pi_Y* [(pi_X^* phi) 1_S], computed literally:
 * pull phi back to X x Y, multiply by the kernel indicator, push forward to Y.
 */
inline Function radon(const Function& phi, const Kernel& s)
{
    if (phi.size() != s.nx) throw InputError("radon: function domain does not match kernel");
    const std::size_t n = s.nx * s.ny;
    Map to_x(n), to_y(n);
    Function ind(n);
    for (std::size_t x = 0; x < s.nx; ++x)
        for (std::size_t y = 0; y < s.ny; ++y) {
            const std::size_t i = x * s.ny + y;
            to_x[i] = x;
            to_y[i] = y;
            ind[i] = s.contains(x, y) ? 1 : 0;
        }
    return pushforward(multiply(pullback(phi, to_x), ind), to_y, s.ny);
}

struct SchapiraResult {
    long long chi1 = 0;
    long long chi2 = 0;
    bool hypotheses_hold = false;
    bool verified = false;
    // A pair (x, x') at which a hypothesis or the identity failed.
    std::optional<std::pair<std::size_t, std::size_t>> violation;
};

/**
 * Checks the inversion hypotheses for S ⊂ X x Y and S' ⊂ Y x X on a finite
 * model (chi(S_x ∩ S'_x) constant, chi(S_x ∩ S'_x') constant for x != x'),
 * then verifies
 *   (R_S' o R_S) phi = (chi1 - chi2) phi + chi2 (integral of phi) 1_X
 * on every indicator function 1_x, which spans CF(X) linearly.
 */
inline SchapiraResult schapira_check(const Kernel& s, const Kernel& s_prime)
{
    if (s_prime.nx != s.ny || s_prime.ny != s.nx) throw InputError("schapira_check: kernel shapes do not compose");
    SchapiraResult r;
    const std::size_t nx = s.nx;
    auto fibre_chi = [&](std::size_t x, std::size_t xp) {
        long long c = 0;
        for (std::size_t y = 0; y < s.ny; ++y) c += (s.contains(x, y) && s_prime.contains(y, xp)) ? 1 : 0;
        return c;
    };
    bool have1 = false, have2 = false;
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t xp = 0; xp < nx; ++xp) {
            const long long c = fibre_chi(x, xp);
            long long& target = (x == xp) ? r.chi1 : r.chi2;
            bool& have = (x == xp) ? have1 : have2;
            if (!have) {
                target = c;
                have = true;
            } else if (c != target) {
                r.violation = {x, xp};
                return r;
            }
        }
    r.hypotheses_hold = true;
    for (std::size_t x0 = 0; x0 < nx; ++x0) {
        const Function phi = indicator(nx, x0);
        const Function lhs = radon(radon(phi, s), s_prime);
        const long long total = integral(phi);
        for (std::size_t x = 0; x < nx; ++x) {
            const long long rhs = (r.chi1 - r.chi2) * phi[x] + r.chi2 * total;
            if (lhs[x] != rhs) {
                r.violation = {x0, x};
                return r;
            }
        }
    }
    r.verified = true;
    return r;
}

}  // namespace lect::cf

#endif  // LECT_CF_CALCULUS_HPP
