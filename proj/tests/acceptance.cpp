// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "lect/lect.hpp"
#include "oracles.hpp"

using namespace lect;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

ScanRequest request(int dim, int nd, std::vector<double> heights, std::vector<double> thresholds)
{
    ScanRequest r;
    r.directions = make_directions(dim, nd);
    r.heights = std::move(heights);
    r.thresholds = std::move(thresholds);
    return r;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome oracle_equivalence()
{
    Rng rng(1001);
    std::size_t checks = 0, mismatches = 0, max_size = 0;
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + trial % 2;
        const Complex k = oracle::random_complex(rng, dim, 200, 80, 40);
        max_size = std::max(max_size, k.simplices.size());
        Point v{0, 0, 0};
        double norm = 0;
        while (norm < 1e-3) {
            for (int a = 0; a < dim; ++a) v[a] = rng.normal();
            norm = std::sqrt(dot(v, v));
        }
        for (int a = 0; a < dim; ++a) v[a] /= norm;
        const EulerCurve c = ect_curve(k, v);
        for (int s = 0; s < 100; ++s) {
            // Every fourth height sits exactly on a vertex height.
            const double h = (s % 4 == 3) ? dot(k.points[rng.below(k.points.size())], v) : rng.uniform(-1.8, 1.8);
            ++checks;
            mismatches += c.value_at(h) != oracle::halfspace_chi(k, v, h);
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {mismatches == 0 && max_size <= 200 && secs < 60,
            std::to_string(checks) + " checks, " + std::to_string(mismatches) + " mismatches, largest complex " +
                std::to_string(max_size) + " simplices, " + fmt("%.1f s", secs)};
}

Outcome euler_ground_truths()
{
    const std::vector<Simplex> tetra =
        close_simplices({Simplex{0, 1, 2}, Simplex{0, 1, 3}, Simplex{0, 2, 3}, Simplex{1, 2, 3}});
    const std::vector<Simplex> tri = close_simplices({Simplex{0, 1, 2}});
    const long long a = euler_characteristic(tetra), b = euler_characteristic(tri), c = euler_characteristic(std::vector<Simplex>{});
    return {a == 2 && b == 1 && c == 0, "tetrahedron boundary " + std::to_string(a) + ", triangle " +
                                            std::to_string(b) + ", empty " + std::to_string(c)};
}

Outcome marginal_equals_weighted()
{
    Rng rng(1003);
    const auto start = std::chrono::steady_clock::now();
    std::size_t checks = 0, mismatches = 0;
    // Weights are k/8, so k/16 lists every weight value and every midpoint.
    std::vector<double> t;
    for (int k = 1; k <= 16; ++k) t.push_back(k / 16.0);
    for (int trial = 0; trial < 50; ++trial) {
        const WeightedComplex w = oracle::random_weighted(rng, 2 + trial % 2);
        if (!is_admissible(w)) return {false, "generator produced an inadmissible complex"};
        const ScanRequest req = request(w.complex.dim, 12, linspace(-1.8, 1.8, 61), t);
        const MarginalCurveSet m = marginal_curves(select_transform(w, req));
        for (std::size_t i = 0; i < req.directions.size(); ++i) {
            const WeightedCurve c = weighted_euler_curve(w, req.directions[i]);
            for (std::size_t j = 0; j < req.heights.size(); ++j) {
                ++checks;
                mismatches += m.at(i, j) != c.value_at(req.heights[j]);
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {mismatches == 0 && secs < 30,
            std::to_string(checks) + " grid values, " + std::to_string(mismatches) + " mismatches, " + fmt("%.1f s", secs)};
}

Outcome equivariance()
{
    Rng rng(1004);
    const std::size_t n = 8;
    const ScanRequest req = request(2, int(n), linspace(-1.7, 1.7, 41), uniform_thresholds(12));
    const Matrix3 flip{{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
    std::size_t mismatched = 0, elements = 0;
    for (int trial = 0; trial < 3; ++trial) {
        const PLField f = oracle::jittered_field(rng, 6, 2);
        const TransformGrid base = select_transform(f, req);
        const std::size_t block = base.num_heights() * base.num_thresholds();
        for (std::size_t j = 0; j < n; ++j) {
            const Matrix3 rot = rotation_2d((long long)j, (long long)n);
            Matrix3 refl{};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c) refl[a][b] += rot[a][c] * flip[c][b];
            const TransformGrid gr = select_transform(rotate_field(f, rot), req);
            const TransformGrid gf = select_transform(rotate_field(f, refl), req);
            bool ok_r = true, ok_f = true;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t ir = (i + n - j) % n, ifl = (j + n - i) % n;
                ok_r = ok_r && std::equal(gr.values.begin() + i * block, gr.values.begin() + (i + 1) * block,
                                          base.values.begin() + ir * block);
                ok_f = ok_f && std::equal(gf.values.begin() + i * block, gf.values.begin() + (i + 1) * block,
                                          base.values.begin() + ifl * block);
            }
            elements += 2;
            mismatched += !ok_r + !ok_f;
        }
    }
    return {mismatched == 0, std::to_string(elements) + " group-element checks over 3 fields, " +
                                 std::to_string(mismatched) + " mismatched"};
}

Outcome ect_distance_reduction()
{
    Rng rng(1005);
    const std::vector<double> heights = linspace(-1.6, 1.6, 40);
    const ScanRequest req = request(2, 16, heights, {1.0});
    auto support = [](const PLField& x) {
        Complex k = x.complex;
        k.simplices.clear();
        for (const Simplex& s : x.simplices()) {
            bool all = true;
            for (Index i : s) all = all && x.values[i] == 1.0;
            if (all) k.simplices.push_back(s);
        }
        return k;
    };
    std::vector<PLField> fields;
    for (int i = 0; i < 20; ++i) {
        PLField f = oracle::jittered_field(rng, 6, 2);
        for (double& v : f.values) v = rng.uniform() < 0.6 ? 1.0 : 0.0;
        fields.push_back(f);
    }
    double worst = 0;
    for (std::size_t a = 0; a < fields.size(); ++a) {
        const std::size_t b = (a + 1) % fields.size();
        const Complex ka = support(fields[a]), kb = support(fields[b]);
        double total = 0;
        for (const Point& v : req.directions.directions) {
            const auto ca = oracle::ect_samples(ka, v, heights), cb = oracle::ect_samples(kb, v, heights);
            for (std::size_t j = 0; j + 1 < heights.size(); ++j) {
                const double x = double(ca[j] - cb[j]), y = double(ca[j + 1] - cb[j + 1]);
                total += 0.5 * (heights[j + 1] - heights[j]) * (x * x + y * y);
            }
        }
        const double expected = std::sqrt(total / double(req.directions.size()));
        const double got = select_distance(select_transform(fields[a], req), select_transform(fields[b], req));
        worst = std::max(worst, std::abs(got - expected) / std::max(expected, 1e-300));
    }
    return {worst <= 1e-9, "20 indicator-field pairs, worst relative error " + fmt("%.3g", worst)};
}

Outcome alignment_2d()
{
    const auto start = std::chrono::steady_clock::now();
    const int n = 64, res = 41;
    const ScanRequest req = request(2, n, padded_heights(std::sqrt(2.0), 50), uniform_thresholds(10));
    const PLField f = voxel_to_pl(gen_glyph_2d(res));
    const TransformGrid a = select_transform(f, req);
    bool ok = true;
    std::ostringstream d;
    for (int j0 : {5, 16, 37}) {
        const AlignResult exact = align_2d(a, select_transform(rotate_field(f, rotation_2d(j0, n)), req));
        const double angle = 2 * std::numbers::pi * j0 / n;
        const AlignResult regen = align_2d(a, select_transform(voxel_to_pl(gen_glyph_2d(res, angle)), req));
        const long long diff = ((regen.shift - j0) % n + n) % n;
        const bool pass = exact.shift == j0 && exact.distance == 0.0 && (diff <= 1 || diff >= n - 1);
        ok = ok && pass;
        d << "j0=" << j0 << ": exact " << exact.shift << " (d=" << exact.distance << "), regenerated " << regen.shift
          << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    d << fmt("%.1f s", secs);
    return {ok && secs < 120, d.str()};
}

/// Distance between family mean grids under the default quadrature.
double centroid_distance(const SuiteResult& r, int fa, int fb)
{
    const TransformGrid& g0 = r.transforms[0];
    auto mean = [&](int fam) {
        std::vector<double> m(g0.values.size(), 0.0);
        double count = 0;
        for (std::size_t i = 0; i < r.transforms.size(); ++i) {
            if (r.families[i] != fam) continue;
            for (std::size_t e = 0; e < m.size(); ++e) m[e] += r.transforms[i].values[e];
            ++count;
        }
        for (double& x : m) x /= count;
        return m;
    };
    const std::vector<double> a = mean(fa), b = mean(fb);
    const GridQuadrature q(g0.num_directions(), g0.heights, g0.thresholds, DistanceOptions{});
    return q.distance(std::span<const double>(a), std::span<const double>(b));
}

SuiteResult paper_scale_suite(int setup)
{
    return run_suite(gen_field_suite(10, setup, 42), preset_axes("sim3d"));
}

Outcome simulation_clustering(const SuiteResult& s1, const SuiteResult& s2, double secs)
{
    std::ostringstream d;
    // Setup 1: purity of the 4-cluster cut and the closest centroid pair.
    const auto cut1 = cut_tree(hierarchical_cluster(s1.distances, Linkage::average), s1.families.size(), 4);
    const double purity = cluster_purity(cut1, s1.families);
    double best = INFINITY;
    std::pair<int, int> closest{0, 0};
    d << "setup 1 purity " << fmt("%.3f", purity) << ", centroid distances";
    for (int a = 1; a <= 4; ++a)
        for (int b = a + 1; b <= 4; ++b) {
            const double c = centroid_distance(s1, a, b);
            d << " " << a << "-" << b << "=" << fmt("%.3f", c);
            if (c < best) {
                best = c;
                closest = {a, b};
            }
        }
    d << ", closest " << closest.first << "-" << closest.second;
    // Setup 2: the cluster holding most family-1 fields.
    const auto cut2 = cut_tree(hierarchical_cluster(s2.distances, Linkage::average), s2.families.size(), 4);
    std::map<int, std::pair<int, int>> per;  // cluster -> (family-1 members, size)
    for (std::size_t i = 0; i < cut2.size(); ++i) {
        per[cut2[i]].second += 1;
        per[cut2[i]].first += s2.families[i] == 1;
    }
    int host = -1;
    for (const auto& [c, counts] : per)
        if (host < 0 || counts.first > per[host].first) host = c;
    const double precision = double(per[host].first) / double(per[host].second);
    d << "; setup 2 family-1 cluster precision " << fmt("%.3f", precision) << " (" << per[host].first << " of "
      << per[host].second << ", recall " << fmt("%.2f", per[host].first / 10.0) << "); " << fmt("%.0f s", secs);
    const bool pass = purity >= 0.9 && closest == std::pair<int, int>{2, 4} && precision >= 0.8;
    return {pass, d.str()};
}

Outcome discretization_stability()
{
    const auto suite = gen_field_suite(1, 1, 42);
    const std::vector<LabeledGrid> pair{suite[0], suite[1]};
    std::vector<double> d;
    for (auto [nd, nh, nt] : {std::tuple{150, 50, 25}, std::tuple{300, 100, 50}}) {
        AxesSpec axes;
        axes.n_directions = nd;
        axes.n_heights = nh;
        axes.thresholds = uniform_thresholds(std::size_t(nt));
        axes.radius = std::sqrt(3.0);
        d.push_back(run_suite(pair, axes).distances(0, 1));
    }
    const double rel = std::abs(d[0] - d[1]) / d[1];
    return {rel < 0.05, "family 1 vs family 2: " + fmt("%.5f at (150,50,25), %.5f at (300,100,50), relative %.4f", d[0],
                                                         d[1], rel)};
}

Outcome schapira_inversion()
{
    std::ostringstream d;
    bool ok = true;
    auto check = [&](const char* name, const cf::Kernel& s, const cf::Kernel& sp, long long c1, long long c2) {
        const cf::SchapiraResult r = cf::schapira_check(s, sp);
        ok = ok && r.hypotheses_hold && r.verified && r.chi1 == c1 && r.chi2 == c2;
        d << name << " (chi1=" << r.chi1 << ", chi2=" << r.chi2 << (r.verified ? ", verified" : ", FAILED") << "); ";
    };
    for (std::size_t n = 1; n <= 7; ++n) check(("diagonal " + std::to_string(n)).c_str(), cf::diagonal_kernel(n), cf::diagonal_kernel(n), 1, 0);
    check("full 5x3", cf::full_kernel(5, 3), cf::full_kernel(3, 5), 3, 3);
    const cf::Kernel fano = cf::fano_kernel();
    check("Fano", fano, fano.transposed(), 3, 1);
    return {ok, d.str()};
}

Outcome moduli_checks()
{
    std::ostringstream d;
    bool ok = true;
    const PLField seg = make_closed_field(2, {{0, 0, 0}, {1, 0, 0}}, {0, 0.5}, {Simplex{0, 1}});
    ok = ok && check_gap_condition(seg, 0.1).pass && !check_gap_condition(seg, 0.2).pass;
    ModuliParams p;
    p.d = 2;
    p.k = 1;
    p.delta = 3;
    p.delta_B = 1.0 / 3.0;
    const long long lead = delta_bound(p).leading_term;
    p.d = 3;
    p.k = 2;
    p.delta = 1;
    p.delta_B = 0.1;
    const long long lead2 = delta_bound(p).leading_term;
    ok = ok && lead == 24 && lead2 == 3200;
    d << "gap examples ok, leading terms " << lead << " and " << lead2;

    // Observability at one threshold inside an edge's value range carries over to every other one.
    Rng rng(1010);
    std::size_t observed = 0, checks = 0, failures = 0;
    for (int trial = 0; trial < 20; ++trial) {
        PLField f = oracle::jittered_field(rng, 4, 2);
        std::vector<double> v(f.values.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (double(i) + 1.0) / double(v.size() + 1);
        rng.shuffle(v);
        f.values = v;
        for (const Simplex& e : f.simplices()) {
            if (e.n != 2) continue;
            const double lo = std::min(f.values[e[0]], f.values[e[1]]), hi = std::max(f.values[e[0]], f.values[e[1]]);
            const double a = rng.uniform(0, 2 * std::numbers::pi);
            const Point dir{std::cos(a), std::sin(a), 0};
            const double t0 = rng.uniform(lo, hi);
            if (t0 <= lo || t0 >= hi || !edge_observable(f, e, dir, t0)) continue;
            ++observed;
            for (int s = 0; s < 5; ++s) {
                const double t = rng.uniform(lo, hi);
                if (t <= lo || t >= hi) continue;
                ++checks;
                failures += !edge_observable(f, e, dir, t);
            }
        }
    }
    ok = ok && failures == 0 && observed > 0;
    d << "; uniform observability: " << observed << " observed edges, " << checks << " re-checks, " << failures
      << " failures";
    return {ok, d.str()};
}

Outcome classifier_sanity(const SuiteResult& s1)
{
    std::vector<std::size_t> idx;
    std::vector<int> labels;
    for (std::size_t i = 0; i < s1.families.size(); ++i)
        if (s1.families[i] == 1 || s1.families[i] == 3) {
            idx.push_back(i);
            labels.push_back(s1.families[i] == 1 ? 1 : -1);
        }
    const DistanceMatrix m = s1.distances.subset(idx);
    const Split split = split_train_test(labels, 0.5, 42);
    const DistanceMatrix train = m.subset(split.train);
    std::vector<int> ytrain;
    for (std::size_t i : split.train) ytrain.push_back(labels[i]);
    const double lambda = median_bandwidth(train);
    const SVMModel model = svm_train(train, ytrain, lambda);
    std::vector<double> scores;
    std::vector<int> ytest;
    for (std::size_t i : split.test) {
        std::vector<double> row;
        for (std::size_t j : split.train) row.push_back(m(i, j));
        scores.push_back(svm_decision(model, row));
        ytest.push_back(labels[i]);
    }
    const AucInterval ci = delong_ci(scores, ytest);
    const double unit = auc({0.1, 0.4, 0.35, 0.8}, {-1, -1, 1, 1});
    return {ci.auc >= 0.95 && unit == 0.75,
            fmt("test AUC %.3f (DeLong 95%% [%.3f, %.3f]), bandwidth %.3f", ci.auc, ci.lo, ci.hi, lambda) +
                ", unit case " + fmt("%.2f", unit)};
}

}  // namespace

int main()
{
    int failed = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << " | " << o.detail << " | "
                  << fmt("%.1f s", secs) << std::endl;
    };

    report(1, "ECT equals half-space clipping oracle", oracle_equivalence);
    report(2, "Euler characteristic ground truths", euler_ground_truths);
    report(3, "marginal curves equal weighted Euler curves", marginal_equals_weighted);
    report(4, "dihedral equivariance on 8 directions", equivariance);
    report(5, "SELECT distance of indicator fields equals ECT distance", ect_distance_reduction);
    report(6, "2D alignment recovers the rotation (n = 64)", alignment_2d);

    std::optional<SuiteResult> s1, s2;
    double suite_secs = 0;
    try {
        const auto start = std::chrono::steady_clock::now();
        s1 = paper_scale_suite(1);
        s2 = paper_scale_suite(2);
        suite_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (const std::exception& e) {
        std::cerr << "simulation suite failed: " << e.what() << std::endl;
    }
    report(7, "simulation clustering at 362 x 100 x 30", [&]() -> Outcome {
        if (!s1 || !s2) return {false, "suite not available"};
        return simulation_clustering(*s1, *s2, suite_secs);
    });
    report(8, "discretization stability", discretization_stability);
    report(9, "Schapira inversion on finite kernels", schapira_inversion);
    report(10, "moduli checks and uniform observability", moduli_checks);
    report(11, "classifier sanity (family 1 vs 3)", [&]() -> Outcome {
        if (!s1) return {false, "suite not available"};
        return classifier_sanity(*s1);
    });
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
