#ifndef LECT_IO_HPP
#define LECT_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "analysis.hpp"
#include "field.hpp"
#include "stats.hpp"

namespace lect {

/// Shortest text that reads back to the same double.
inline std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

/// Whitespace tokens with their source line numbers; '#' starts a comment.
class TokenReader {
public:
    explicit TokenReader(std::istream& in)
    {
        std::string line;
        std::size_t no = 0;
        while (std::getline(in, line)) {
            ++no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::vector<std::string> toks;
            for (std::string t; ls >> t;) toks.push_back(t);
            if (!toks.empty()) lines_.push_back({no, std::move(toks)});
        }
    }

    bool done() const { return pos_ >= lines_.size(); }
    std::size_t line_number() const { return done() ? (lines_.empty() ? 0 : lines_.back().first) : lines_[pos_].first; }

    bool more_tokens()
    {
        while (!done() && tok_ >= lines_[pos_].second.size()) {
            ++pos_;
            tok_ = 0;
        }
        return !done();
    }

    /// Next non-empty line as a list of tokens.
    const std::vector<std::string>& line(const char* what)
    {
        if (done()) fail(std::string("unexpected end of file, expected ") + what);
        last_ = lines_[pos_].first;
        tok_ = 0;
        return lines_[pos_++].second;
    }

    /// Next token, crossing line breaks.
    const std::string& token(const char* what)
    {
        if (!more_tokens()) fail(std::string("unexpected end of file, expected ") + what);
        last_ = lines_[pos_].first;
        return lines_[pos_].second[tok_++];
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw InputError("line " + std::to_string(last_ ? last_ : line_number()) + ": " + msg);
    }

    double to_double(const std::string& s) const
    {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            fail("not a number: '" + s + "'");
        }
        if (used != s.size()) fail("not a number: '" + s + "'");
        if (!std::isfinite(v)) fail("non-finite value: '" + s + "'");
        return v;
    }

    long long to_int(const std::string& s) const
    {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (const std::exception&) {
            fail("not an integer: '" + s + "'");
        }
        if (used != s.size()) fail("not an integer: '" + s + "'");
        return v;
    }

private:
    std::vector<std::pair<std::size_t, std::vector<std::string>>> lines_;
    std::size_t pos_ = 0, tok_ = 0, last_ = 0;
};

inline void expect_count(const TokenReader& r, const std::vector<std::string>& toks, std::size_t n, const char* what)
{
    if (toks.size() != n)
        r.fail(std::string("expected ") + std::to_string(n) + " fields for " + what + ", got " + std::to_string(toks.size()));
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    return out;
}

}  // namespace detail

enum class FieldFormat { mesh_text, voxel_text };

inline FieldFormat field_format_from_string(const std::string& s)
{
    if (s == "mesh_text" || s == "mesh") return FieldFormat::mesh_text;
    if (s == "voxel_text" || s == "voxel") return FieldFormat::voxel_text;
    throw InputError("unknown field format: " + s);
}

inline PLField read_mesh(std::istream& in)
{
    detail::TokenReader r(in);
    auto head = r.line("header");
    detail::expect_count(r, head, 2, "header");
    if (head[0] != "PLFIELD") r.fail("expected 'PLFIELD <d>'");
    const long long d = r.to_int(head[1]);
    if (d != 2 && d != 3) r.fail("dimension must be 2 or 3");
    auto counts = r.line("vertex and simplex counts");
    detail::expect_count(r, counts, 2, "counts");
    const long long nv = r.to_int(counts[0]), ns = r.to_int(counts[1]);
    if (nv < 1 || ns < 0) r.fail("counts must be positive");
    std::vector<Point> pts(std::size_t(nv), Point{0, 0, 0});
    std::vector<double> vals(static_cast<std::size_t>(nv));
    for (long long i = 0; i < nv; ++i) {
        auto toks = r.line("vertex");
        detail::expect_count(r, toks, std::size_t(d + 1), "vertex");
        for (long long a = 0; a < d; ++a) pts[i][a] = r.to_double(toks[a]);
        vals[i] = r.to_double(toks[d]);
    }
    std::vector<Simplex> simplices;
    simplices.reserve(std::size_t(ns));
    for (long long s = 0; s < ns; ++s) {
        auto toks = r.line("simplex");
        if (toks.empty()) r.fail("empty simplex line");
        const long long k = r.to_int(toks[0]);
        if (k < 0 || k > d) r.fail("simplex dimension out of range");
        detail::expect_count(r, toks, std::size_t(k + 2), "simplex");
        std::vector<Index> ids;
        for (long long q = 0; q <= k; ++q) {
            const long long id = r.to_int(toks[q + 1]);
            if (id < 0 || id >= nv) r.fail("vertex index out of range");
            if (!ids.empty() && Index(id) <= ids.back()) r.fail("simplex vertex indices must be distinct and ascending");
            ids.push_back(Index(id));
        }
        simplices.push_back(Simplex::from_range(ids.begin(), ids.end()));
    }
    if (!r.done()) r.fail("trailing content after the last simplex");
    try {
        return make_field(int(d), std::move(pts), std::move(vals), std::move(simplices));
    } catch (const InvariantError& e) {
        throw InputError(e.what());
    }
}

inline VoxelGrid read_voxel(std::istream& in)
{
    detail::TokenReader r(in);
    auto head = r.line("header");
    detail::expect_count(r, head, 2, "header");
    if (head[0] != "VOXEL" || head[1] != "3") r.fail("expected 'VOXEL 3'");
    VoxelGrid g;
    auto dims = r.line("dims");
    detail::expect_count(r, dims, 3, "dims");
    for (int a = 0; a < 3; ++a) {
        const long long n = r.to_int(dims[a]);
        if (n < 1) r.fail("dims must be positive");
        g.dims[a] = int(n);
    }
    auto origin = r.line("origin");
    detail::expect_count(r, origin, 3, "origin");
    for (int a = 0; a < 3; ++a) g.origin[a] = r.to_double(origin[a]);
    auto spacing = r.line("spacing");
    detail::expect_count(r, spacing, 3, "spacing");
    for (int a = 0; a < 3; ++a) {
        g.spacing[a] = r.to_double(spacing[a]);
        if (!(g.spacing[a] > 0)) r.fail("spacing must be positive");
    }
    g.values.resize(g.size());
    for (double& v : g.values) v = r.to_double(r.token("voxel value"));
    if (r.more_tokens()) r.fail("more values than nx*ny*nz");
    return g;
}

inline PLField load_mesh(const std::string& path)
{
    auto in = detail::open_in(path);
    try {
        return read_mesh(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline VoxelGrid load_voxel(const std::string& path)
{
    auto in = detail::open_in(path);
    try {
        return read_voxel(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline std::variant<PLField, VoxelGrid> load_field(const std::string& path, FieldFormat format)
{
    if (format == FieldFormat::mesh_text) return load_mesh(path);
    return load_voxel(path);
}

/// Guesses the format from the first keyword of the file.
inline FieldFormat sniff_format(const std::string& path)
{
    auto in = detail::open_in(path);
    for (std::string tok; in >> tok;) {
        if (tok[0] == '#') {
            std::getline(in, tok);
            continue;
        }
        if (tok == "PLFIELD") return FieldFormat::mesh_text;
        if (tok == "VOXEL") return FieldFormat::voxel_text;
        break;
    }
    throw InputError(path + ": unrecognised field file (expected PLFIELD or VOXEL header)");
}

/// Loads either format and returns a PL field, triangulating voxel grids.
inline PLField load_as_pl(const std::string& path)
{
    if (sniff_format(path) == FieldFormat::mesh_text) return load_mesh(path);
    return voxel_to_pl(load_voxel(path));
}

inline void write_mesh(std::ostream& out, const PLField& f)
{
    const int d = f.complex.dim;
    out << "PLFIELD " << d << "\n" << f.complex.points.size() << " " << f.complex.simplices.size() << "\n";
    for (std::size_t i = 0; i < f.complex.points.size(); ++i) {
        for (int a = 0; a < d; ++a) out << format_double(f.complex.points[i][a]) << " ";
        out << format_double(f.values[i]) << "\n";
    }
    for (const Simplex& s : f.complex.simplices) {
        out << s.dim();
        for (Index v : s) out << " " << v;
        out << "\n";
    }
}

inline void write_voxel(std::ostream& out, const VoxelGrid& g)
{
    out << "VOXEL 3\n" << g.dims[0] << " " << g.dims[1] << " " << g.dims[2] << "\n";
    for (const Point* p : {&g.origin, &g.spacing})
        out << format_double((*p)[0]) << " " << format_double((*p)[1]) << " " << format_double((*p)[2]) << "\n";
    for (std::size_t i = 0; i < g.values.size(); ++i)
        out << format_double(g.values[i]) << ((i + 1) % std::size_t(g.dims[0]) == 0 ? "\n" : " ");
}

inline void save_mesh(const std::string& path, const PLField& f)
{
    auto out = detail::open_out(path);
    write_mesh(out, f);
}

inline void save_voxel(const std::string& path, const VoxelGrid& g)
{
    auto out = detail::open_out(path);
    write_voxel(out, g);
}

inline std::string to_string(DirectionScheme s)
{
    switch (s) {
    case DirectionScheme::uniform_circle: return "uniform_circle";
    case DirectionScheme::fibonacci_sphere: return "fibonacci_sphere";
    case DirectionScheme::explicit_list: return "explicit";
    }
    return "explicit";
}

inline DirectionScheme scheme_from_string(const std::string& s)
{
    if (s == "uniform_circle") return DirectionScheme::uniform_circle;
    if (s == "fibonacci_sphere") return DirectionScheme::fibonacci_sphere;
    if (s == "explicit") return DirectionScheme::explicit_list;
    throw InputError("unknown direction scheme: " + s);
}

/*
 * Transform grid text format:
 *   TRANSFORM <kind>
 *   dim <d> scheme <scheme>
 *   axes <directions> <heights> <thresholds>
 *   directions            then one line of d coordinates per direction
 *   heights <h...>
 *   thresholds <t...>
 *   values                then one line of T integers per (direction, height)
 */
inline void write_transform(std::ostream& out, const TransformGrid& g)
{
    const int d = g.directions.dim;
    out << "TRANSFORM " << to_string(g.kind) << "\n";
    out << "dim " << d << " scheme " << to_string(g.directions.scheme) << "\n";
    out << "axes " << g.num_directions() << " " << g.num_heights() << " " << g.num_thresholds() << "\n";
    out << "directions\n";
    for (const Point& v : g.directions.directions) {
        for (int a = 0; a < d; ++a) out << (a ? " " : "") << format_double(v[a]);
        out << "\n";
    }
    out << "heights";
    for (double h : g.heights) out << " " << format_double(h);
    out << "\nthresholds";
    for (double t : g.thresholds) out << " " << format_double(t);
    out << "\nvalues\n";
    const std::size_t T = g.num_thresholds();
    for (std::size_t row = 0; row < g.num_directions() * g.num_heights(); ++row) {
        for (std::size_t k = 0; k < T; ++k) out << (k ? " " : "") << g.values[row * T + k];
        out << "\n";
    }
}

inline TransformGrid read_transform(std::istream& in)
{
    detail::TokenReader r(in);
    TransformGrid g;
    auto head = r.line("header");
    detail::expect_count(r, head, 2, "header");
    if (head[0] != "TRANSFORM") r.fail("expected 'TRANSFORM <kind>'");
    try {
        g.kind = kind_from_string(head[1]);
    } catch (const InputError& e) {
        r.fail(e.what());
    }
    auto meta = r.line("dim/scheme");
    detail::expect_count(r, meta, 4, "dim/scheme");
    if (meta[0] != "dim" || meta[2] != "scheme") r.fail("expected 'dim <d> scheme <name>'");
    const long long d = r.to_int(meta[1]);
    if (d != 2 && d != 3) r.fail("dimension must be 2 or 3");
    g.directions.dim = int(d);
    try {
        g.directions.scheme = scheme_from_string(meta[3]);
    } catch (const InputError& e) {
        r.fail(e.what());
    }
    auto axes = r.line("axes");
    detail::expect_count(r, axes, 4, "axes");
    if (axes[0] != "axes") r.fail("expected 'axes <n> <h> <t>'");
    const long long nd = r.to_int(axes[1]), nh = r.to_int(axes[2]), nt = r.to_int(axes[3]);
    if (nd < 1 || nh < 1 || nt < 1) r.fail("axis lengths must be positive");
    if (r.line("directions") != std::vector<std::string>{"directions"}) r.fail("expected 'directions'");
    for (long long i = 0; i < nd; ++i) {
        auto toks = r.line("direction");
        detail::expect_count(r, toks, std::size_t(d), "direction");
        Point v{0, 0, 0};
        for (long long a = 0; a < d; ++a) v[a] = r.to_double(toks[a]);
        g.directions.directions.push_back(v);
    }
    auto hs = r.line("heights");
    detail::expect_count(r, hs, std::size_t(nh + 1), "heights");
    if (hs[0] != "heights") r.fail("expected 'heights'");
    for (long long j = 0; j < nh; ++j) g.heights.push_back(r.to_double(hs[j + 1]));
    auto ts = r.line("thresholds");
    detail::expect_count(r, ts, std::size_t(nt + 1), "thresholds");
    if (ts[0] != "thresholds") r.fail("expected 'thresholds'");
    for (long long k = 0; k < nt; ++k) g.thresholds.push_back(r.to_double(ts[k + 1]));
    if (r.line("values") != std::vector<std::string>{"values"}) r.fail("expected 'values'");
    g.allocate();
    for (long long row = 0; row < nd * nh; ++row) {
        auto toks = r.line("value row");
        detail::expect_count(r, toks, std::size_t(nt), "value row");
        for (long long k = 0; k < nt; ++k) g.values[std::size_t(row * nt + k)] = std::int32_t(r.to_int(toks[k]));
    }
    if (!r.done()) r.fail("trailing content after values");
    return g;
}

inline void save_transform(const std::string& path, const TransformGrid& g)
{
    auto out = detail::open_out(path);
    write_transform(out, g);
}

inline TransformGrid load_transform(const std::string& path)
{
    auto in = detail::open_in(path);
    try {
        return read_transform(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// Long-format CSV: direction,vx,vy,vz,height,threshold,value
inline void write_transform_csv(std::ostream& out, const TransformGrid& g)
{
    out << "direction,vx,vy,vz,height,threshold,value\n";
    for (std::size_t i = 0; i < g.num_directions(); ++i) {
        const Point& v = g.directions[i];
        const std::string dir = std::to_string(i) + "," + format_double(v[0]) + "," + format_double(v[1]) + "," +
                                format_double(v[2]) + ",";
        for (std::size_t j = 0; j < g.num_heights(); ++j)
            for (std::size_t k = 0; k < g.num_thresholds(); ++k)
                out << dir << format_double(g.heights[j]) << "," << format_double(g.thresholds[k]) << ","
                    << g.at(i, j, k) << "\n";
    }
}

/// Square CSV with header "id,<id_1>,...,<id_n>" and one row per item.
inline void write_distance_csv(std::ostream& out, const DistanceMatrix& m)
{
    out << "id";
    for (const auto& id : m.ids) out << "," << id;
    out << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.ids[i];
        for (std::size_t j = 0; j < m.size(); ++j) out << "," << format_double(m(i, j));
        out << "\n";
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline DistanceMatrix read_distance_csv(std::istream& in)
{
    std::string line;
    std::size_t no = 1;
    auto fail = [&](const std::string& msg) -> void {
        throw InputError("line " + std::to_string(no) + ": " + msg);
    };
    if (!std::getline(in, line)) throw InputError("line 1: empty distance file");
    auto head = split_csv_line(line);
    if (head.size() < 2 || head[0] != "id") fail("header must start with 'id'");
    DistanceMatrix m(head.size() - 1);
    for (std::size_t i = 0; i < m.size(); ++i) m.ids[i] = head[i + 1];
    for (std::size_t i = 0; i < m.size(); ++i) {
        ++no;
        if (!std::getline(in, line)) fail("missing row");
        auto cells = split_csv_line(line);
        if (cells.size() != m.size() + 1) fail("wrong number of columns");
        if (cells[0] != m.ids[i]) fail("row id does not match header order");
        for (std::size_t j = 0; j < m.size(); ++j) {
            try {
                std::size_t used = 0;
                m(i, j) = std::stod(cells[j + 1], &used);
                if (used != cells[j + 1].size()) throw std::invalid_argument("junk");
            } catch (const std::exception&) {
                fail("not a number: '" + cells[j + 1] + "'");
            }
        }
    }
    try {
        validate(m);
    } catch (const InvariantError& e) {
        throw InputError(e.what());
    }
    return m;
}

inline void save_distance_csv(const std::string& path, const DistanceMatrix& m)
{
    auto out = detail::open_out(path);
    write_distance_csv(out, m);
}

inline DistanceMatrix load_distance_csv(const std::string& path)
{
    auto in = detail::open_in(path);
    try {
        return read_distance_csv(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// id,label,x1..xk
inline void write_mds_csv(std::ostream& out, const std::vector<std::string>& ids, const std::vector<std::string>& labels,
                          const std::vector<std::vector<double>>& coords)
{
    const std::size_t k = coords.empty() ? 0 : coords[0].size();
    out << "id,label";
    for (std::size_t c = 0; c < k; ++c) out << ",x" << c + 1;
    out << "\n";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        out << ids[i] << "," << (i < labels.size() ? labels[i] : "");
        for (double x : coords[i]) out << "," << format_double(x);
        out << "\n";
    }
}

/// step,a,b,distance,size (scipy-style ids: leaves 0..n-1, cluster from step s is n+s).
inline void write_merges_csv(std::ostream& out, const std::vector<Merge>& merges)
{
    out << "step,a,b,distance,size\n";
    for (std::size_t s = 0; s < merges.size(); ++s)
        out << s << "," << merges[s].a << "," << merges[s].b << "," << format_double(merges[s].distance) << ","
            << merges[s].size << "\n";
}

/// shift,distance
inline void write_profile_csv(std::ostream& out, const std::vector<double>& profile)
{
    out << "shift,distance\n";
    for (std::size_t j = 0; j < profile.size(); ++j) out << j << "," << format_double(profile[j]) << "\n";
}

/// height,value
inline void write_curve_csv(std::ostream& out, const std::vector<double>& heights, const std::vector<int>& values)
{
    out << "height,value\n";
    for (std::size_t j = 0; j < heights.size(); ++j) out << format_double(heights[j]) << "," << values[j] << "\n";
}

/// direction,height,value
inline void write_marginal_csv(std::ostream& out, const MarginalCurveSet& m)
{
    out << "direction,height,value\n";
    for (std::size_t i = 0; i < m.directions.size(); ++i)
        for (std::size_t j = 0; j < m.heights.size(); ++j)
            out << i << "," << format_double(m.heights[j]) << "," << format_double(m.at(i, j)) << "\n";
}

}  // namespace lect

#endif  // LECT_IO_HPP
