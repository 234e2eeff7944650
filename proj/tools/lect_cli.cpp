// lect: command-line front end for the transform library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lect/lect.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Common {
    std::string out_dir = ".";
    int threads = 0;
    std::uint64_t seed = 42;
};

struct Run {
    Common common;
    std::string subcommand;
    std::vector<std::string> argv;
    ordered_json params = ordered_json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    std::string path(const std::string& name) const { return (fs::path(common.out_dir) / name).string(); }

    std::ofstream open(const std::string& name)
    {
        const std::string p = path(name);
        std::ofstream out(p);
        if (!out) throw lect::InputError("cannot write " + p);
        outputs.push_back(name);
        return out;
    }

    void write_json(const std::string& name, const ordered_json& j)
    {
        auto out = open(name);
        out << j.dump(2) << "\n";
    }

    void write_manifest()
    {
        ordered_json m;
        m["tool"] = "lect";
        m["version"] = kVersion;
        m["subcommand"] = subcommand;
        m["argv"] = argv;
        m["seed"] = common.seed;
        m["threads"] = common.threads;
        m["parameters"] = params;
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        const std::string p = path("manifest_" + subcommand + ".json");
        std::ofstream out(p);
        if (!out) throw lect::InputError("cannot write " + p);
        out << m.dump(2) << "\n";
    }
};

std::string stem_of(const std::string& path)
{
    std::string name = fs::path(path).filename().string();
    for (const char* suffix : {".transform.txt", ".voxel", ".mesh", ".txt"}) {
        const std::string s = suffix;
        if (name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0)
            return name.substr(0, name.size() - s.size());
    }
    return fs::path(path).stem().string();
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    for (const std::string& cell : lect::split_csv_line(s)) {
        if (cell.empty()) continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw lect::InputError("not a number in list: '" + cell + "'");
        }
        if (used != cell.size()) throw lect::InputError("not a number in list: '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

ordered_json axes_json(const lect::TransformGrid& g)
{
    ordered_json j;
    j["kind"] = lect::to_string(g.kind);
    j["dim"] = g.directions.dim;
    j["scheme"] = lect::to_string(g.directions.scheme);
    j["directions"] = g.num_directions();
    j["heights"] = g.num_heights();
    j["height_range"] = {g.heights.front(), g.heights.back()};
    j["thresholds"] = g.thresholds;
    return j;
}

ordered_json simplex_json(const lect::Simplex& s) { return std::vector<lect::Index>(s.begin(), s.end()); }

/// Simple CSV table keyed by column name.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        throw lect::InputError("missing column '" + name + "'");
    }
    bool has(const std::string& name) const
    {
        return std::find(header.begin(), header.end(), name) != header.end();
    }
};

Table read_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw lect::InputError("cannot open " + path);
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw lect::InputError(path + ": empty file");
    t.header = lect::split_csv_line(line);
    std::size_t no = 1;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line == "\r") continue;
        auto cells = lect::split_csv_line(line);
        if (cells.size() != t.header.size())
            throw lect::InputError(path + ": line " + std::to_string(no) + ": wrong number of columns");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

/// id -> label string from a CSV with an id column and the requested label column.
std::map<std::string, std::string> read_labels(const std::string& path, std::string column)
{
    const Table t = read_table(path);
    if (column.empty()) column = t.has("family") ? "family" : "label";
    const std::size_t ci = t.column("id"), cl = t.column(column);
    std::map<std::string, std::string> out;
    for (const auto& r : t.rows) out[r[ci]] = r[cl];
    return out;
}

std::vector<lect::PLField> load_fields(const std::vector<std::string>& paths)
{
    std::vector<lect::PLField> out;
    for (const auto& p : paths) out.push_back(lect::load_as_pl(p));
    return out;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::vector<std::string> in;
    std::string format = "auto";
    std::string mask;
    std::string normalize = "none";
    bool rescale = false;
    std::string out;
};

void cmd_ingest(Run& run, const IngestArgs& a)
{
    run.inputs = a.in;
    if (!a.mask.empty()) run.inputs.push_back(a.mask);
    const lect::FieldFormat fmt =
        a.format == "auto" ? lect::sniff_format(a.in.front()) : lect::field_format_from_string(a.format);
    if (fmt == lect::FieldFormat::mesh_text && (a.in.size() > 1 || !a.mask.empty()))
        throw lect::InputError("averaging and masks apply to voxel inputs only");
    lect::PLField f;
    if (fmt == lect::FieldFormat::mesh_text) {
        f = lect::load_mesh(a.in.front());
    } else {
        // Several grids are averaged pointwise; a mask zeroes the field outside it.
        lect::VoxelGrid g = lect::load_voxel(a.in.front());
        for (std::size_t i = 1; i < a.in.size(); ++i) {
            const lect::VoxelGrid h = lect::load_voxel(a.in[i]);
            if (h.dims != g.dims) throw lect::InputError("averaged grids must share dims");
            for (std::size_t q = 0; q < g.values.size(); ++q) g.values[q] += h.values[q];
        }
        for (double& v : g.values) v /= double(a.in.size());
        if (!a.mask.empty()) {
            const lect::VoxelGrid m = lect::load_voxel(a.mask);
            if (m.dims != g.dims) throw lect::InputError("mask dims differ from the field");
            for (std::size_t q = 0; q < g.values.size(); ++q)
                if (!(m.values[q] > 0)) g.values[q] = 0.0;
        }
        f = lect::voxel_to_pl(g);
    }
    bool constant = false;
    if (a.normalize == "per_field" || a.rescale) {
        lect::NormalizeOptions opt;
        opt.rescale_geometry = a.rescale;
        auto r = lect::normalize_field(f, opt);
        if (a.normalize == "per_field") {
            constant = r.constant;
            f = r.field;
        } else {
            r.field.values = f.values;
            f = r.field;
        }
    } else if (a.normalize != "none") {
        throw lect::InputError("ingest normalisation must be none or per_field");
    }
    lect::validate_field(f);
    const std::string out_name = a.out.empty() ? stem_of(a.in.front()) + ".mesh" : a.out;
    {
        auto out = run.open(out_name);
        lect::write_mesh(out, f);
    }
    std::vector<std::size_t> by_dim(4, 0);
    for (const auto& s : f.simplices()) ++by_dim[std::size_t(s.dim())];
    by_dim.resize(std::size_t(f.dim()) + 1);
    auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
    ordered_json j;
    j["dim"] = f.dim();
    j["vertices"] = f.complex.points.size();
    j["simplices"] = f.simplices().size();
    j["simplices_by_dim"] = by_dim;
    j["euler_characteristic"] = lect::euler_characteristic(f.complex);
    j["value_range"] = {*mn, *mx};
    j["bounding_box"] = {f.box_lo, f.box_hi};
    j["constant_field"] = constant;
    j["output"] = out_name;
    run.write_json(stem_of(out_name) + ".ingest.json", j);
    run.params = {{"format", a.format}, {"normalize", a.normalize}, {"rescale_geometry", a.rescale}};
    std::cout << j.dump(2) << "\n";
}

struct AxesArgs {
    std::string preset;
    int dim = 0;
    int directions = 0;
    int heights = 0;
    int thresholds = 0;
    std::string threshold_list;
    double radius = 0;
};

lect::AxesSpec resolve_axes(const AxesArgs& a, int data_dim)
{
    lect::AxesSpec s = a.preset.empty() ? lect::AxesSpec{} : lect::preset_axes(a.preset);
    s.dim = a.dim ? a.dim : data_dim;
    if (a.directions) s.n_directions = a.directions;
    if (a.heights) s.n_heights = a.heights;
    if (a.thresholds && !a.threshold_list.empty()) throw lect::InputError("give either --thresholds or --threshold-list");
    if (a.thresholds) s.thresholds = lect::uniform_thresholds(std::size_t(a.thresholds));
    if (!a.threshold_list.empty()) s.thresholds = parse_list(a.threshold_list);
    if (a.radius > 0) s.radius = a.radius;
    return s;
}

ordered_json axes_params(const lect::AxesSpec& s)
{
    ordered_json j;
    j["dim"] = s.dim;
    j["directions"] = s.n_directions;
    j["heights"] = s.n_heights;
    j["thresholds"] = s.thresholds;
    if (s.radius) j["radius"] = *s.radius;
    j["rescale_geometry"] = s.rescale_geometry;
    return j;
}

struct TransformArgs {
    std::vector<std::string> in;
    AxesArgs axes;
    std::string kind = "SELECT";
    std::string normalize = "global";
    bool csv = false;
};

void cmd_transform(Run& run, const TransformArgs& a)
{
    run.inputs = a.in;
    std::vector<lect::PLField> raw = load_fields(a.in);
    const int dim = raw.front().dim();
    for (const auto& f : raw)
        if (f.dim() != dim) throw lect::InputError("all inputs must share one dimension");
    const lect::AxesSpec axes = resolve_axes(a.axes, dim);
    const auto fields = lect::normalize_all(raw, lect::scaling_from_string(a.normalize), axes.rescale_geometry);
    const lect::ScanRequest req = lect::make_request(axes, fields, lect::kind_from_string(a.kind));
    ordered_json summary = ordered_json::array();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const lect::TransformGrid g = lect::transform(fields[i], req, run.common.threads);
        const std::string id = stem_of(a.in[i]);
        {
            auto out = run.open(id + ".transform.txt");
            lect::write_transform(out, g);
        }
        if (a.csv) {
            auto out = run.open(id + ".transform.csv");
            lect::write_transform_csv(out, g);
        }
        summary.push_back({{"id", id}, {"file", id + ".transform.txt"}});
    }
    run.params = axes_params(axes);
    run.params["kind"] = a.kind;
    run.params["normalize"] = a.normalize;
    run.params["height_range"] = {req.heights.front(), req.heights.back()};
    ordered_json j;
    j["axes"] = run.params;
    j["transforms"] = summary;
    run.write_json("transform.json", j);
    std::cout << "wrote " << fields.size() << " transform(s) with axes (" << req.directions.size() << ", "
              << req.heights.size() << ", " << req.thresholds.size() << ")\n";
}

lect::DistanceOptions distance_options(double p, const std::string& rule, bool normalized)
{
    lect::DistanceOptions o;
    o.p = p;
    if (rule == "trapezoid") o.rule = lect::ThresholdRule::trapezoid;
    else if (rule == "step") o.rule = lect::ThresholdRule::step;
    else throw lect::InputError("unknown threshold rule: " + rule);
    o.normalized = normalized;
    return o;
}

struct DistArgs {
    std::vector<std::string> in;
    double p = 2.0;
    std::string rule = "trapezoid";
    bool normalized = false;
    std::string out = "distances.csv";
};

void cmd_dist(Run& run, const DistArgs& a)
{
    run.inputs = a.in;
    std::vector<lect::TransformGrid> grids;
    std::vector<std::string> ids;
    for (const auto& p : a.in) {
        grids.push_back(lect::load_transform(p));
        ids.push_back(stem_of(p));
    }
    const auto m = lect::distance_matrix(grids, ids, distance_options(a.p, a.rule, a.normalized), run.common.threads);
    auto out = run.open(a.out);
    lect::write_distance_csv(out, m);
    run.params = {{"p", a.p}, {"rule", a.rule}, {"normalized", a.normalized}};
    std::cout << "wrote " << m.size() << "x" << m.size() << " distance matrix\n";
}

void cmd_marginal(Run& run, const std::vector<std::string>& in, const std::string& rule)
{
    run.inputs = in;
    const lect::ThresholdRule r = distance_options(2.0, rule, false).rule;
    for (const auto& p : in) {
        const auto m = lect::marginal_curves(lect::load_transform(p), r);
        auto out = run.open(stem_of(p) + ".marginal.csv");
        lect::write_marginal_csv(out, m);
    }
    run.params = {{"rule", rule}};
}

struct AlignArgs {
    std::string a, b;
    double p = 2.0;
    std::string rule = "trapezoid";
};

void cmd_align2d(Run& run, const AlignArgs& a)
{
    run.inputs = {a.a, a.b};
    const auto ga = lect::load_transform(a.a), gb = lect::load_transform(a.b);
    const auto r = lect::align_2d(ga, gb, distance_options(a.p, a.rule, false), run.common.threads);
    {
        auto out = run.open("align_profile.csv");
        lect::write_profile_csv(out, r.profile);
    }
    ordered_json j;
    j["shift"] = r.shift;
    j["distance"] = r.distance;
    j["directions"] = ga.num_directions();
    j["angle"] = 2.0 * std::numbers::pi * double(r.shift) / double(ga.num_directions());
    j["convention"] = "B rotated by +2*pi*shift/n relative to A";
    run.write_json("align.json", j);
    run.params = {{"p", a.p}, {"rule", a.rule}};
    std::cout << j.dump(2) << "\n";
}

void cmd_simulate(Run& run, int setup, int n_per_family)
{
    const auto suite = lect::gen_field_suite(n_per_family, setup, run.common.seed);
    auto manifest = run.open("fields.csv");
    manifest << "id,family,alpha,beta,gamma,delta,noise_sd,seed\n";
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const std::string id = lect::field_id(i);
        const auto& s = suite[i].spec;
        manifest << id << "," << s.family << "," << lect::format_double(s.alpha) << "," << lect::format_double(s.beta)
                 << "," << lect::format_double(s.gamma) << ","
                 << (s.family == 4 ? lect::format_double(s.delta) : std::string()) << ","
                 << lect::format_double(s.noise_sd) << "," << s.seed << "\n";
        auto out = run.open(id + ".voxel");
        lect::write_voxel(out, suite[i].grid);
    }
    run.params = {{"setup", setup}, {"n_per_family", n_per_family}, {"grid", 10}};
    std::cout << "wrote " << suite.size() << " fields\n";
}

struct ClusterArgs {
    std::string dist;
    std::string labels;
    std::string label_column;
    std::string linkage = "average";
    int k = 4;
    int dims = 2;
};

void cmd_cluster(Run& run, const ClusterArgs& a)
{
    run.inputs = {a.dist};
    const auto m = lect::load_distance_csv(a.dist);
    std::vector<std::string> labels(m.size());
    if (!a.labels.empty()) {
        run.inputs.push_back(a.labels);
        const auto lab = read_labels(a.labels, a.label_column);
        for (std::size_t i = 0; i < m.size(); ++i) {
            auto it = lab.find(m.ids[i]);
            if (it == lab.end()) throw lect::InputError("no label for id " + m.ids[i]);
            labels[i] = it->second;
        }
    }
    const auto coords = lect::classical_mds(m, std::size_t(a.dims));
    {
        auto out = run.open("mds.csv");
        lect::write_mds_csv(out, m.ids, labels, coords);
    }
    const auto merges = lect::hierarchical_cluster(m, lect::linkage_from_string(a.linkage));
    {
        auto out = run.open("merges.csv");
        lect::write_merges_csv(out, merges);
    }
    ordered_json j;
    j["linkage"] = a.linkage;
    j["k"] = a.k;
    if (a.k >= 1 && std::size_t(a.k) <= m.size()) {
        const auto cut = lect::cut_tree(merges, m.size(), std::size_t(a.k));
        ordered_json assign = ordered_json::object();
        for (std::size_t i = 0; i < m.size(); ++i) assign[m.ids[i]] = cut[i];
        j["clusters"] = assign;
        if (!a.labels.empty()) {
            std::map<std::string, int> codes;
            std::vector<int> lab;
            for (const auto& l : labels) lab.push_back(codes.emplace(l, int(codes.size())).first->second);
            j["purity"] = lect::cluster_purity(cut, lab);
        }
    }
    run.write_json("cluster.json", j);
    run.params = {{"linkage", a.linkage}, {"k", a.k}, {"mds_dims", a.dims}};
    std::cout << j.dump(2) << "\n";
}

struct ClassifyArgs {
    std::string dist;
    std::string labels;
    std::string label_column;
    std::string positive;
    std::string negative;
    double fraction = 0.5;
    double C = 1.0;
    double level = 0.95;
};

void cmd_classify(Run& run, const ClassifyArgs& a)
{
    run.inputs = {a.dist, a.labels};
    const auto full = lect::load_distance_csv(a.dist);
    const auto lab = read_labels(a.labels, a.label_column);
    std::vector<std::size_t> keep;
    std::vector<int> y;
    for (std::size_t i = 0; i < full.size(); ++i) {
        auto it = lab.find(full.ids[i]);
        if (it == lab.end()) throw lect::InputError("no label for id " + full.ids[i]);
        if (it->second == a.positive) {
            keep.push_back(i);
            y.push_back(1);
        } else if (a.negative.empty() || it->second == a.negative) {
            keep.push_back(i);
            y.push_back(-1);
        }
    }
    const auto m = full.subset(keep);
    const auto split = lect::split_train_test(y, a.fraction, run.common.seed);
    const auto train = m.subset(split.train);
    std::vector<int> ytrain;
    for (auto i : split.train) ytrain.push_back(y[i]);
    const double lambda = lect::median_bandwidth(train);
    lect::SVMOptions opt;
    opt.C = a.C;
    const auto model = lect::svm_train(train, ytrain, lambda, opt);
    std::vector<double> scores;
    std::vector<int> ytest;
    ordered_json test = ordered_json::array();
    for (auto i : split.test) {
        std::vector<double> d;
        for (auto t : split.train) d.push_back(m(i, t));
        scores.push_back(lect::svm_decision(model, d));
        ytest.push_back(y[i]);
        test.push_back({{"id", m.ids[i]}, {"label", y[i]}, {"score", scores.back()}});
    }
    const auto ci = lect::delong_ci(scores, ytest, a.level);
    ordered_json j;
    j["positive"] = a.positive;
    j["negative"] = a.negative.empty() ? "rest" : a.negative;
    j["n_train"] = split.train.size();
    j["n_test"] = split.test.size();
    j["lambda"] = lambda;
    j["C"] = a.C;
    j["support_vectors"] = model.support.size();
    j["auc"] = ci.auc;
    j["ci_level"] = a.level;
    j["ci"] = {ci.lo, ci.hi};
    j["test"] = test;
    run.write_json("classify.json", j);
    run.params = {{"positive", a.positive}, {"negative", a.negative}, {"fraction", a.fraction},
                  {"C", a.C},               {"level", a.level}};
    std::cout << "AUC " << ci.auc << " [" << ci.lo << ", " << ci.hi << "]\n";
}

struct VerifyArgs {
    std::string in;
    lect::ModuliParams p;
    int directions = 64;
    int thresholds = 30;
    int samples = 16;
    int centers = 64;
    std::string normalize = "none";
};

void cmd_verify_class(Run& run, VerifyArgs a)
{
    run.inputs = {a.in};
    lect::PLField f = lect::load_as_pl(a.in);
    if (a.normalize == "per_field") f = lect::normalize_field(f).field;
    else if (a.normalize != "none") throw lect::InputError("verify-class normalisation must be none or per_field");
    a.p.d = f.dim();
    lect::ObservabilityOptions obs;
    obs.n_samples = a.samples;
    obs.n_centers = a.centers;
    obs.seed = run.common.seed;
    obs.threads = run.common.threads;
    const auto dirs = lect::make_directions(f.dim(), a.directions);
    const auto r = lect::verify_class(f, a.p, dirs, lect::uniform_thresholds(std::size_t(a.thresholds)), obs);
    ordered_json j;
    j["cond1"] = r.cond1 ? "pass" : "fail";
    ordered_json c2;
    c2["status"] = r.cond2.pass ? "pass" : "fail";
    if (r.cond2.witness) {
        c2["witness"] = simplex_json(*r.cond2.witness);
        c2["gap"] = r.cond2.gap;
    }
    j["cond2"] = c2;
    ordered_json c3;
    c3["status"] = lect::to_string(r.cond3);
    if (r.cond3_witness) c3["witness"] = simplex_json(*r.cond3_witness);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& e : r.edges) ++counts[int(e.status)];
    c3["edges"] = {{"verified_sampled", counts[0]}, {"violated", counts[1]}, {"unknown", counts[2]}};
    j["cond3"] = c3;
    j["cond4"] = {{"status", r.cond4 ? "pass" : "fail"}, {"max_jumps", r.cond4_max_jumps}, {"k", a.p.k}};
    j["overall"] = r.overall;
    run.write_json("class_report.json", j);
    run.params = {{"d", a.p.d},         {"k", a.p.k},          {"delta_k", a.p.delta_k},
                  {"delta_B", a.p.delta_B}, {"delta", a.p.delta},   {"directions", a.directions},
                  {"thresholds", a.thresholds}, {"samples", a.samples}, {"centers", a.centers}};
    std::cout << j.dump(2) << "\n";
}

void cmd_bound(Run& run, const lect::ModuliParams& p)
{
    const auto b = lect::delta_bound(p);
    ordered_json j;
    j["d"] = p.d;
    j["k"] = p.k;
    j["delta"] = p.delta;
    j["delta_B"] = p.delta_B;
    j["per_level"] = b.per_level;
    j["level_factor"] = b.level_factor;
    j["leading_term"] = b.leading_term;
    j["note"] = b.note;
    run.write_json("bound.json", j);
    run.params = {{"d", p.d}, {"k", p.k}, {"delta", p.delta}, {"delta_B", p.delta_B}};
    std::cout << "leading term " << b.leading_term << "\n";
}

struct CurveArgs {
    std::string in;
    double t = 0.5;
    std::string direction;
    int heights = 100;
    std::string normalize = "none";
};

void cmd_euler_curve(Run& run, const CurveArgs& a)
{
    run.inputs = {a.in};
    lect::PLField f = lect::load_as_pl(a.in);
    if (a.normalize == "per_field") f = lect::normalize_field(f).field;
    else if (a.normalize != "none") throw lect::InputError("euler-curve normalisation must be none or per_field");
    const auto comps = parse_list(a.direction);
    if (int(comps.size()) != f.dim()) throw lect::InputError("direction needs one component per dimension");
    lect::Point v{0, 0, 0};
    for (std::size_t i = 0; i < comps.size(); ++i) v[i] = comps[i];
    const double l = lect::norm(v);
    if (!(l > 0)) throw lect::InputError("direction must be non-zero");
    for (double& c : v) c /= l;
    const auto curve = lect::euler_scan(f, v, a.t);
    lect::DirectionSet one = lect::explicit_directions(f.dim(), {v});
    const auto hs = lect::padded_heights(lect::height_radius(f.complex.points, one), std::size_t(a.heights));
    {
        auto out = run.open("euler_curve.csv");
        lect::write_curve_csv(out, hs, curve.sample(hs));
    }
    ordered_json j;
    j["direction"] = {v[0], v[1], v[2]};
    j["t"] = a.t;
    ordered_json jumps = ordered_json::array();
    for (const auto& [h, val] : curve.jumps) jumps.push_back({{"height", h}, {"value", val}});
    j["jumps"] = jumps;
    j["final_value"] = curve.final_value();
    run.write_json("euler_curve.json", j);
    run.params = {{"t", a.t}, {"direction", comps}, {"heights", a.heights}, {"normalize", a.normalize}};
    std::cout << j.dump(2) << "\n";
}

void add_axes(CLI::App* sc, AxesArgs& a)
{
    sc->add_option("--preset", a.preset, "Axis preset")->check(CLI::IsMember({"sim3d", "mri"}));
    sc->add_option("--dim", a.dim, "Direction dimension (default: the data's)")->check(CLI::IsMember({2, 3}));
    sc->add_option("--directions", a.directions, "Number of directions")->check(CLI::PositiveNumber);
    sc->add_option("--heights", a.heights, "Number of heights")->check(CLI::Range(2, 1 << 20));
    sc->add_option("--thresholds", a.thresholds, "Number of uniform thresholds k/n")->check(CLI::PositiveNumber);
    sc->add_option("--threshold-list", a.threshold_list, "Comma-separated thresholds in (0, 1]");
    sc->add_option("--radius", a.radius, "Height half-range before padding");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lifted and super-lifted Euler characteristic transforms of PL fields"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Run run;
    run.argv.assign(argv + 1, argv + argc);
    auto& c = run.common;
    app.add_option("--out-dir", c.out_dir, "Output directory")->envname("LECT_OUT_DIR");
    app.add_option("--threads", c.threads, "Worker threads (0 = all cores)")->envname("LECT_THREADS")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", c.seed, "Run seed");

    IngestArgs ingest;
    auto* s_ingest = app.add_subcommand("ingest", "Validate a field file and write it in canonical mesh form");
    s_ingest->add_option("--in", ingest.in, "Field file(s); several voxel grids are averaged")->required()->check(CLI::ExistingFile);
    s_ingest->add_option("--format", ingest.format)->check(CLI::IsMember({"auto", "mesh", "voxel", "mesh_text", "voxel_text"}));
    s_ingest->add_option("--mask", ingest.mask, "Voxel mask; the field is zeroed where mask <= 0")->check(CLI::ExistingFile);
    s_ingest->add_option("--normalize", ingest.normalize)->check(CLI::IsMember({"none", "per_field"}));
    s_ingest->add_flag("--rescale-geometry", ingest.rescale, "Map the bounding box into [-1, 1]^d");
    s_ingest->add_option("--out", ingest.out, "Output mesh file name");

    TransformArgs tr;
    auto* s_transform = app.add_subcommand("transform", "Compute SELECT or LECT transforms on shared axes");
    s_transform->add_option("--in", tr.in, "Field files")->required()->check(CLI::ExistingFile);
    add_axes(s_transform, tr.axes);
    s_transform->add_option("--kind", tr.kind)->check(CLI::IsMember({"SELECT", "LECT"}));
    s_transform->add_option("--normalize", tr.normalize)->check(CLI::IsMember({"none", "per_field", "global"}));
    s_transform->add_flag("--csv", tr.csv, "Also write long-format CSV");

    DistArgs dist;
    auto* s_dist = app.add_subcommand("dist", "Pairwise distances between transform files");
    s_dist->add_option("--in", dist.in, "Transform files")->required()->check(CLI::ExistingFile);
    s_dist->add_option("--p", dist.p, "Exponent p >= 1");
    s_dist->add_option("--rule", dist.rule, "Threshold quadrature")->check(CLI::IsMember({"trapezoid", "step"}));
    s_dist->add_flag("--normalized", dist.normalized, "Divide by the (height, threshold) measure");
    s_dist->add_option("--out", dist.out, "Output CSV name");

    std::vector<std::string> marginal_in;
    std::string marginal_rule = "step";
    auto* s_marginal = app.add_subcommand("marginal", "Marginal Euler curves of SELECT transforms");
    s_marginal->add_option("--in", marginal_in, "Transform files")->required()->check(CLI::ExistingFile);
    s_marginal->add_option("--rule", marginal_rule)->check(CLI::IsMember({"trapezoid", "step"}));

    AlignArgs align;
    auto* s_align = app.add_subcommand("align2d", "Cyclic alignment of two 2D transforms");
    s_align->add_option("--a", align.a, "Reference transform")->required()->check(CLI::ExistingFile);
    s_align->add_option("--b", align.b, "Transform to align")->required()->check(CLI::ExistingFile);
    s_align->add_option("--p", align.p);
    s_align->add_option("--rule", align.rule)->check(CLI::IsMember({"trapezoid", "step"}));

    int setup = 1, n_per_family = 10;
    auto* s_sim = app.add_subcommand("simulate", "Generate the four-family quadric suite");
    s_sim->add_option("--setup", setup, "1 = noiseless, 2 = N(0, 0.1^2) noise")->check(CLI::IsMember({1, 2}));
    s_sim->add_option("--n-per-family", n_per_family)->check(CLI::PositiveNumber);

    ClusterArgs cl;
    auto* s_cluster = app.add_subcommand("cluster", "MDS coordinates and agglomerative dendrogram");
    s_cluster->add_option("--dist", cl.dist, "Distance CSV")->required()->check(CLI::ExistingFile);
    s_cluster->add_option("--labels", cl.labels, "CSV with id and label columns")->check(CLI::ExistingFile);
    s_cluster->add_option("--label-column", cl.label_column);
    s_cluster->add_option("--linkage", cl.linkage)->check(CLI::IsMember({"average", "single", "complete"}));
    s_cluster->add_option("--k", cl.k, "Clusters in the flat cut");
    s_cluster->add_option("--dims", cl.dims, "MDS dimensions")->check(CLI::PositiveNumber);

    ClassifyArgs cf;
    auto* s_classify = app.add_subcommand("classify", "Kernel SVM on a distance matrix with AUC and DeLong interval");
    s_classify->add_option("--dist", cf.dist, "Distance CSV")->required()->check(CLI::ExistingFile);
    s_classify->add_option("--labels", cf.labels, "CSV with id and label columns")->required()->check(CLI::ExistingFile);
    s_classify->add_option("--label-column", cf.label_column);
    s_classify->add_option("--positive", cf.positive, "Label of the positive class")->required();
    s_classify->add_option("--negative", cf.negative, "Label of the negative class (default: all others)");
    s_classify->add_option("--fraction", cf.fraction, "Training fraction");
    s_classify->add_option("--C", cf.C, "Soft-margin penalty");
    s_classify->add_option("--level", cf.level, "Confidence level");

    VerifyArgs vc;
    auto* s_verify = app.add_subcommand("verify-class", "Check the field-class membership conditions");
    s_verify->add_option("--in", vc.in, "Field file")->required()->check(CLI::ExistingFile);
    s_verify->add_option("-k,--k", vc.p.k)->check(CLI::PositiveNumber);
    s_verify->add_option("--delta-k", vc.p.delta_k);
    s_verify->add_option("--delta-b", vc.p.delta_B);
    s_verify->add_option("--delta", vc.p.delta);
    s_verify->add_option("--directions", vc.directions)->check(CLI::PositiveNumber);
    s_verify->add_option("--thresholds", vc.thresholds)->check(CLI::PositiveNumber);
    s_verify->add_option("--samples", vc.samples)->check(CLI::NonNegativeNumber);
    s_verify->add_option("--centers", vc.centers)->check(CLI::PositiveNumber);
    s_verify->add_option("--normalize", vc.normalize)->check(CLI::IsMember({"none", "per_field"}));

    lect::ModuliParams bp;
    auto* s_bound = app.add_subcommand("bound", "Leading term of the Euler-scan count bound");
    s_bound->add_option("-d,--dim", bp.d)->required();
    s_bound->add_option("-k,--k", bp.k)->required();
    s_bound->add_option("--delta", bp.delta)->required();
    s_bound->add_option("--delta-b", bp.delta_B)->required();

    CurveArgs ec;
    auto* s_curve = app.add_subcommand("euler-curve", "One SELECT curve at a fixed direction and threshold");
    s_curve->add_option("--in", ec.in, "Field file")->required()->check(CLI::ExistingFile);
    s_curve->add_option("--t", ec.t, "Threshold in (0, 1]")->required();
    s_curve->add_option("--direction", ec.direction, "Comma-separated direction")->required();
    s_curve->add_option("--heights", ec.heights)->check(CLI::Range(2, 1 << 20));
    s_curve->add_option("--normalize", ec.normalize)->check(CLI::IsMember({"none", "per_field"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        lect::default_threads() = c.threads;
        fs::create_directories(c.out_dir);
        CLI::App* sc = app.get_subcommands().front();
        run.subcommand = sc->get_name();
        if (sc == s_ingest) cmd_ingest(run, ingest);
        else if (sc == s_transform) cmd_transform(run, tr);
        else if (sc == s_dist) cmd_dist(run, dist);
        else if (sc == s_marginal) cmd_marginal(run, marginal_in, marginal_rule);
        else if (sc == s_align) cmd_align2d(run, align);
        else if (sc == s_sim) cmd_simulate(run, setup, n_per_family);
        else if (sc == s_cluster) cmd_cluster(run, cl);
        else if (sc == s_classify) cmd_classify(run, cf);
        else if (sc == s_verify) cmd_verify_class(run, vc);
        else if (sc == s_bound) cmd_bound(run, bp);
        else if (sc == s_curve) cmd_euler_curve(run, ec);
        run.write_manifest();
    } catch (const lect::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
