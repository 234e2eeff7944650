#ifndef LECT_STATS_HPP
#define LECT_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "generators.hpp"
#include "geometry.hpp"

namespace lect {

/// Symmetric non-negative pairwise distances with zero diagonal.
struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<double> d;  // row-major n x n

    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : ids(n), d(n * n, 0.0)
    {
        for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    }

    std::size_t size() const { return ids.size(); }
    double operator()(std::size_t i, std::size_t j) const { return d[i * ids.size() + j]; }
    double& operator()(std::size_t i, std::size_t j) { return d[i * ids.size() + j]; }
    void set(std::size_t i, std::size_t j, double v) { (*this)(i, j) = (*this)(j, i) = v; }

    DistanceMatrix subset(const std::vector<std::size_t>& idx) const
    {
        DistanceMatrix s(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            s.ids[a] = ids[idx[a]];
            for (std::size_t b = 0; b < idx.size(); ++b) s(a, b) = (*this)(idx[a], idx[b]);
        }
        return s;
    }
};

inline void validate(const DistanceMatrix& m)
{
    const std::size_t n = m.size();
    if (m.d.size() != n * n) throw InvariantError("distance matrix has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (m(i, i) != 0.0) throw InvariantError("distance matrix diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (!(m(i, j) >= 0.0) || !std::isfinite(m(i, j)))
                throw InvariantError("distances must be finite and non-negative");
            if (std::abs(m(i, j) - m(j, i)) > 1e-12) throw InvariantError("distance matrix is not symmetric");
        }
    }
}

/// Eigenvalues in descending order with eigenvectors as columns (row-major n x n).
inline void symmetric_eigen(const std::vector<double>& a, std::size_t n, std::vector<double>& values,
                            std::vector<double>& vectors)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(Eigen::Index(i), Eigen::Index(j)) = a[i * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw InvariantError("eigen-decomposition failed");
    values.resize(n);
    vectors.assign(n * n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const Eigen::Index src = Eigen::Index(n - 1 - c);
        values[c] = es.eigenvalues()(src);
        for (std::size_t r = 0; r < n; ++r) vectors[r * n + c] = es.eigenvectors()(Eigen::Index(r), src);
    }
}

/// Classical (Torgerson) MDS; row i holds the k coordinates of item i.
inline std::vector<std::vector<double>> classical_mds(const DistanceMatrix& m, std::size_t k = 2)
{
    validate(m);
    const std::size_t n = m.size();
    std::vector<double> b(n * n);
    std::vector<double> row(n, 0.0);
    double all = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double sq = m(i, j) * m(i, j);
            b[i * n + j] = sq;
            row[i] += sq;
            all += sq;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i * n + j] = -0.5 * (b[i * n + j] - row[i] / n - row[j] / n + all / double(n * n));
    std::vector<double> vals, vecs;
    symmetric_eigen(b, n, vals, vecs);
    std::vector<std::vector<double>> coords(n, std::vector<double>(k, 0.0));
    for (std::size_t c = 0; c < k && c < n; ++c) {
        if (!(vals[c] > 0)) continue;
        const double s = std::sqrt(vals[c]);
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r)
            if (std::abs(vecs[r * n + c]) > 1e-12) {
                sign = vecs[r * n + c] > 0 ? 1.0 : -1.0;
                break;
            }
        for (std::size_t r = 0; r < n; ++r) coords[r][c] = sign * s * vecs[r * n + c];
    }
    return coords;
}

enum class Linkage { average, single, complete };

inline Linkage linkage_from_string(const std::string& s)
{
    if (s == "average") return Linkage::average;
    if (s == "single") return Linkage::single;
    if (s == "complete") return Linkage::complete;
    throw InputError("unknown linkage: " + s);
}

/// One agglomeration step. Leaves are 0..n-1, the cluster made at step i is n+i.
struct Merge {
    std::size_t a = 0, b = 0;  // a < b
    double distance = 0;
    std::size_t size = 0;
};

/**
 * Agglomerative clustering by repeated closest-pair merging with
 * Lance-Williams updates. Ties go to the lexicographically smallest pair of
 * cluster ids.
 */
inline std::vector<Merge> hierarchical_cluster(const DistanceMatrix& m, Linkage linkage = Linkage::average)
{
    validate(m);
    const std::size_t n = m.size();
    if (n < 2) throw InputError("clustering needs at least two items");
    std::vector<double> d = m.d;  // indexed by slot
    std::vector<std::size_t> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), 0);
    std::vector<char> alive(n, 1);
    std::vector<Merge> merges;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        std::pair<std::size_t, std::size_t> best_ids{SIZE_MAX, SIZE_MAX};
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const double v = d[i * n + j];
                const std::pair<std::size_t, std::size_t> ids{std::min(id[i], id[j]), std::max(id[i], id[j])};
                if (v < best || (v == best && ids < best_ids)) {
                    best = v;
                    bi = i;
                    bj = j;
                    best_ids = ids;
                }
            }
        }
        merges.push_back({best_ids.first, best_ids.second, best, size[bi] + size[bj]});
        for (std::size_t k = 0; k < n; ++k) {
            if (!alive[k] || k == bi || k == bj) continue;
            const double dik = d[bi * n + k], djk = d[bj * n + k];
            double nd = 0;
            switch (linkage) {
            case Linkage::single: nd = std::min(dik, djk); break;
            case Linkage::complete: nd = std::max(dik, djk); break;
            case Linkage::average: nd = (size[bi] * dik + size[bj] * djk) / double(size[bi] + size[bj]); break;
            }
            d[bi * n + k] = d[k * n + bi] = nd;
        }
        alive[bj] = 0;
        size[bi] += size[bj];
        id[bi] = n + step;
    }
    return merges;
}

/// Flat labels after stopping with k clusters; labels are numbered by smallest member.
inline std::vector<int> cut_tree(const std::vector<Merge>& merges, std::size_t n, std::size_t k)
{
    if (k < 1 || k > n) throw InputError("cut_tree: k out of range");
    std::vector<std::size_t> parent(2 * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t s = 0; s < n - k; ++s) {
        parent[find(merges[s].a)] = n + s;
        parent[find(merges[s].b)] = n + s;
    }
    std::vector<int> labels(n, -1);
    std::vector<std::pair<std::size_t, int>> roots;
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        auto it = std::find_if(roots.begin(), roots.end(), [&](const auto& p) { return p.first == r; });
        if (it == roots.end()) {
            roots.emplace_back(r, next);
            labels[i] = next++;
        } else {
            labels[i] = it->second;
        }
    }
    return labels;
}

/// Fraction of items whose cluster's majority label matches their own label.
inline double cluster_purity(const std::vector<int>& clusters, const std::vector<int>& labels)
{
    if (clusters.size() != labels.size() || clusters.empty()) throw InputError("purity: size mismatch");
    std::size_t correct = 0;
    const int kmax = *std::max_element(clusters.begin(), clusters.end());
    for (int c = 0; c <= kmax; ++c) {
        std::vector<std::pair<int, std::size_t>> counts;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (clusters[i] != c) continue;
            auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& p) { return p.first == labels[i]; });
            if (it == counts.end()) counts.emplace_back(labels[i], 1);
            else ++it->second;
        }
        std::size_t best = 0;
        for (const auto& p : counts) best = std::max(best, p.second);
        correct += best;
    }
    return double(correct) / double(clusters.size());
}

/// Median of the off-diagonal distances, each unordered pair counted once.
inline double median_bandwidth(const DistanceMatrix& m)
{
    const std::size_t n = m.size();
    if (n < 2) throw InputError("median_bandwidth needs at least two items");
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) v.push_back(m(i, j));
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Double-exponential kernel exp(-d^2 / lambda^2).
inline double kernel_value(double distance, double lambda) { return std::exp(-(distance * distance) / (lambda * lambda)); }

inline std::vector<double> kernel_matrix(const DistanceMatrix& m, double lambda)
{
    if (!(lambda > 0)) throw InputError("kernel bandwidth must be positive");
    std::vector<double> k(m.d.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = kernel_value(m.d[i], lambda);
    return k;
}

struct SVMModel {
    std::vector<std::size_t> support;  // indices into the training set
    std::vector<double> coef;          // alpha_i * y_i for each support index
    std::vector<double> alpha;         // all training multipliers
    double bias = 0;
    double lambda = 1;
    double C = 1;
    std::size_t n_train = 0;
    int iterations = 0;
};

struct SVMOptions {
    double C = 1.0;
    double tolerance = 1e-3;
    int max_iterations = 1000000;
};

/**
 * Soft-margin SVM on a precomputed double-exponential kernel, trained with
 * SMO: each step picks the maximal violating pair and solves the
 * two-variable subproblem in closed form, until the KKT gap falls below
 * the tolerance.
 */
inline SVMModel svm_train(const DistanceMatrix& train, const std::vector<int>& labels, double lambda,
                          const SVMOptions& opt = {})
{
    const std::size_t n = train.size();
    if (labels.size() != n) throw InputError("svm_train: one label per item required");
    bool pos = false, neg = false;
    for (int y : labels) {
        if (y != 1 && y != -1) throw InputError("svm_train: labels must be +1 or -1");
        pos = pos || y == 1;
        neg = neg || y == -1;
    }
    if (!pos || !neg) throw InputError("svm_train: both classes are required");
    if (!(opt.C > 0)) throw InputError("svm_train: C must be positive");
    const std::vector<double> k = kernel_matrix(train, lambda);
    auto Q = [&](std::size_t i, std::size_t j) { return double(labels[i] * labels[j]) * k[i * n + j]; };

    std::vector<double> alpha(n, 0.0), grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
    const double C = opt.C, eps = opt.tolerance;
    auto in_up = [&](std::size_t t) {
        return (labels[t] == 1 && alpha[t] < C) || (labels[t] == -1 && alpha[t] > 0);
    };
    auto in_low = [&](std::size_t t) {
        return (labels[t] == 1 && alpha[t] > 0) || (labels[t] == -1 && alpha[t] < C);
    };
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        double gmax = -std::numeric_limits<double>::infinity(), gmin = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -labels[t] * grad[t];
            if (in_up(t) && v > gmax) {
                gmax = v;
                i = t;
            }
            if (in_low(t) && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        if (i == n || j == n || gmax - gmin < eps) break;

        const double yi = labels[i], yj = labels[j];
        double quad = Q(i, i) + Q(j, j) - 2.0 * yi * yj * Q(i, j);
        if (quad <= 1e-12) quad = 1e-12;
        const double ai_old = alpha[i], aj_old = alpha[j];
        // Move along y_i a_i + y_j a_j = const.
        double step = (gmax - gmin) / quad;
        // Bounds on step so that both multipliers stay in [0, C].
        auto clip = [&](double a, double y, double dir_sign) {
            // a_new = a + dir_sign * y * step
            const double d = dir_sign * y;
            if (d > 0) return (C - a) / d;
            return (0.0 - a) / d;
        };
        step = std::min(step, clip(ai_old, yi, 1.0));
        step = std::min(step, clip(aj_old, yj, -1.0));
        alpha[i] = std::clamp(ai_old + yi * step, 0.0, C);
        alpha[j] = std::clamp(aj_old - yj * step, 0.0, C);
        const double di = alpha[i] - ai_old, dj = alpha[j] - aj_old;
        for (std::size_t t = 0; t < n; ++t) grad[t] += Q(t, i) * di + Q(t, j) * dj;
    }

    SVMModel m;
    m.alpha = alpha;
    m.lambda = lambda;
    m.C = C;
    m.n_train = n;
    m.iterations = it;
    double sum = 0;
    std::size_t free = 0;
    double ub = std::numeric_limits<double>::infinity(), lb = -ub;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = labels[t] * grad[t];
        if (alpha[t] > 0 && alpha[t] < C) {
            sum -= yg;
            ++free;
        } else if ((labels[t] == 1 && alpha[t] >= C) || (labels[t] == -1 && alpha[t] <= 0)) {
            ub = std::min(ub, -yg);
        } else {
            lb = std::max(lb, -yg);
        }
    }
    // Free vectors pin the bias; otherwise take the middle of the feasible interval.
    if (free > 0) m.bias = sum / double(free);
    else m.bias = 0.5 * ((std::isfinite(ub) ? ub : lb) + (std::isfinite(lb) ? lb : ub));
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > 0) {
            m.support.push_back(t);
            m.coef.push_back(alpha[t] * labels[t]);
        }
    return m;
}

/// Decision value from the distances between a new item and every training item.
inline double svm_decision(const SVMModel& m, const std::vector<double>& distances_to_train)
{
    if (distances_to_train.size() != m.n_train) throw InputError("svm_decision: one distance per training item");
    double f = m.bias;
    for (std::size_t s = 0; s < m.support.size(); ++s)
        f += m.coef[s] * kernel_value(distances_to_train[m.support[s]], m.lambda);
    return f;
}

inline void check_binary(const std::vector<double>& scores, const std::vector<int>& labels)
{
    if (scores.size() != labels.size()) throw InputError("scores and labels differ in length");
    bool pos = false, neg = false;
    for (int y : labels) {
        pos = pos || y == 1;
        neg = neg || y != 1;
    }
    if (!pos || !neg) throw InputError("both classes are required");
}

inline double pair_score(double pos, double neg) { return pos > neg ? 1.0 : (pos == neg ? 0.5 : 0.0); }

/// Mann-Whitney AUC; ties count one half. Label +1 is the positive class.
inline double auc(const std::vector<double>& scores, const std::vector<int>& labels)
{
    check_binary(scores, labels);
    double total = 0;
    std::size_t np = 0, nn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        ++np;
        for (std::size_t j = 0; j < scores.size(); ++j)
            if (labels[j] != 1) total += pair_score(scores[i], scores[j]);
    }
    for (int y : labels) nn += (y != 1);
    return total / (double(np) * double(nn));
}

/// Standard normal quantile by bisection on the CDF.
inline double normal_quantile(double p)
{
    if (!(p > 0 && p < 1)) throw InputError("normal_quantile: p must lie in (0, 1)");
    double lo = -40, hi = 40;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct AucInterval {
    double auc = 0;
    double lo = 0, hi = 0;
    double variance = 0;
};

/// DeLong variance of the AUC with a normal-approximation interval clipped to [0, 1].
inline AucInterval delong_ci(const std::vector<double>& scores, const std::vector<int>& labels, double level = 0.95)
{
    check_binary(scores, labels);
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(scores[i]);
    const double m = double(pos.size()), n = double(neg.size());
    std::vector<double> v10(pos.size(), 0.0), v01(neg.size(), 0.0);
    double a = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = 0; j < neg.size(); ++j) {
            const double s = pair_score(pos[i], neg[j]);
            v10[i] += s / n;
            v01[j] += s / m;
            a += s;
        }
    a /= m * n;
    auto sample_var = [&](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        double s = 0;
        for (double x : v) s += (x - a) * (x - a);
        return s / double(v.size() - 1);
    };
    AucInterval r;
    r.auc = a;
    r.variance = sample_var(v10) / m + sample_var(v01) / n;
    const double z = normal_quantile(0.5 + 0.5 * level);
    const double half = z * std::sqrt(r.variance);
    r.lo = std::clamp(a - half, 0.0, 1.0);
    r.hi = std::clamp(a + half, 0.0, 1.0);
    return r;
}

struct Split {
    std::vector<std::size_t> train, test;
};

/**
 * Stratified random split. Each class contributes round-half-up(fraction *
 * count) items to the training set; both sides are returned sorted.
 */
inline Split split_train_test(const std::vector<int>& labels, double fraction, std::uint64_t seed)
{
    if (labels.size() < 4) throw InputError("split needs at least four items");
    if (!(fraction > 0 && fraction < 1)) throw InputError("split fraction must lie in (0, 1)");
    std::vector<int> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    Rng rng(seed);
    Split s;
    for (int c : classes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) idx.push_back(i);
        if (idx.size() < 2) throw InputError("every class needs at least two members");
        rng.shuffle(idx);
        std::size_t nt = std::size_t(std::floor(fraction * double(idx.size()) + 0.5));
        nt = std::clamp<std::size_t>(nt, 1, idx.size() - 1);
        s.train.insert(s.train.end(), idx.begin(), idx.begin() + nt);
        s.test.insert(s.test.end(), idx.begin() + nt, idx.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

}  // namespace lect

#endif  // LECT_STATS_HPP
