#ifndef LECT_PIPELINE_HPP
#define LECT_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "field.hpp"
#include "generators.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "transforms.hpp"

namespace lect {

/// Transform axes before the height range is known.
struct AxesSpec {
    int dim = 3;
    int n_directions = 362;
    int n_heights = 100;
    std::vector<double> thresholds = uniform_thresholds(30);
    std::optional<double> radius;  // height half-range before padding; derived from the data when empty
    bool rescale_geometry = false;
};

/// sim3d: 362 x 100 x 30 uniform thresholds. mri: the same directions and
/// heights with thresholds {5, 10, 100, ..., 6400} / 9061 and geometry mapped into [-1, 1]^3.
inline AxesSpec preset_axes(const std::string& name)
{
    AxesSpec a;
    if (name == "sim3d") return a;
    if (name == "mri") {
        a.thresholds.clear();
        for (double c : {5.0, 10.0, 100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0}) a.thresholds.push_back(c / 9061.0);
        a.rescale_geometry = true;
        return a;
    }
    throw InputError("unknown preset: " + name);
}

/// Request shared by a set of fields: the height range covers all of them.
inline ScanRequest make_request(const AxesSpec& axes, const std::vector<PLField>& fields,
                                TransformKind kind = TransformKind::SELECT)
{
    if (axes.n_heights < 2) throw InputError("need at least two heights");
    ScanRequest req;
    req.kind = kind;
    req.directions = make_directions(axes.dim, axes.n_directions);
    double r = 0;
    if (axes.radius) {
        r = *axes.radius;
    } else {
        for (const PLField& f : fields) r = std::max(r, height_radius(f.complex.points, req.directions));
    }
    req.heights = padded_heights(r, std::size_t(axes.n_heights));
    req.thresholds = axes.thresholds;
    validate_request(req);
    return req;
}

enum class Scaling { none, per_field, global };

inline Scaling scaling_from_string(const std::string& s)
{
    if (s == "none") return Scaling::none;
    if (s == "per_field") return Scaling::per_field;
    if (s == "global") return Scaling::global;
    throw InputError("unknown normalisation: " + s);
}

/// Normalises values into [0, 1]; global mode uses one affine map for all fields.
inline std::vector<PLField> normalize_all(const std::vector<PLField>& fields, Scaling mode, bool rescale_geometry = false)
{
    std::vector<PLField> out;
    out.reserve(fields.size());
    NormalizeOptions opt;
    opt.rescale_geometry = rescale_geometry;
    if (mode == Scaling::global) {
        opt.mode = NormalizeMode::global;
        opt.lo = std::numeric_limits<double>::infinity();
        opt.hi = -opt.lo;
        for (const PLField& f : fields)
            for (double v : f.values) {
                opt.lo = std::min(opt.lo, v);
                opt.hi = std::max(opt.hi, v);
            }
    }
    for (const PLField& f : fields) {
        if (mode == Scaling::none) {
            out.push_back(rescale_geometry ? normalize_field(f, {NormalizeMode::global, 0.0, 1.0, true}).field : f);
            if (rescale_geometry) out.back().values = f.values;
        } else {
            out.push_back(normalize_field(f, opt).field);
        }
    }
    return out;
}

/// Pairwise distances between transforms, parallel over pairs.
inline DistanceMatrix distance_matrix(const std::vector<TransformGrid>& grids, const std::vector<std::string>& ids,
                                      const DistanceOptions& opt = {}, int threads = 0)
{
    const std::size_t n = grids.size();
    if (ids.size() != n) throw InputError("one id per transform required");
    for (std::size_t i = 1; i < n; ++i) check_same_axes(grids[0], grids[i]);
    DistanceMatrix m(n);
    m.ids = ids;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<double> out(pairs.size());
    parallel_for(pairs.size(), threads,
                 [&](std::size_t p) { out[p] = select_distance(grids[pairs[p].first], grids[pairs[p].second], opt); });
    for (std::size_t p = 0; p < pairs.size(); ++p) m.set(pairs[p].first, pairs[p].second, out[p]);
    return m;
}

/// Suite fields as PL fields on a shared value scale.
inline std::vector<PLField> suite_fields(const std::vector<LabeledGrid>& suite)
{
    std::vector<PLField> raw;
    raw.reserve(suite.size());
    for (const auto& s : suite) raw.push_back(voxel_to_pl(s.grid));
    return normalize_all(raw, Scaling::global);
}

struct SuiteResult {
    std::vector<int> families;
    std::vector<std::string> ids;
    std::vector<TransformGrid> transforms;
    DistanceMatrix distances;
};

inline std::string field_id(std::size_t i)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "field_%03zu", i);
    return buf;
}

/// Simulated suite -> SELECT transforms on shared axes -> distance matrix.
inline SuiteResult run_suite(const std::vector<LabeledGrid>& suite, const AxesSpec& axes,
                             const DistanceOptions& opt = {}, int threads = 0)
{
    SuiteResult r;
    const std::vector<PLField> fields = suite_fields(suite);
    const ScanRequest req = make_request(axes, fields);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        r.families.push_back(suite[i].family);
        r.ids.push_back(field_id(i));
        r.transforms.push_back(select_transform(fields[i], req, threads));
    }
    r.distances = distance_matrix(r.transforms, r.ids, opt, threads);
    return r;
}

}  // namespace lect

#endif  // LECT_PIPELINE_HPP
