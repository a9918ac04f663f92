// SPDX-License-Identifier: MIT
#include "holder/grid.hpp"

#include "holder/errors.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace holder {

TargetNorm parse_target_norm(std::string_view name) {
    if (name == "l2") return TargetNorm::l2;
    if (name == "linf") return TargetNorm::linf;
    if (name == "l1") return TargetNorm::l1;
    throw ArgumentError("unknown target norm '" + std::string(name) + "' (expected l2, linf or l1)");
}

SourceNorm parse_source_norm(std::string_view name) {
    if (name == "l2") return SourceNorm::l2;
    if (name == "linf") return SourceNorm::linf;
    throw ArgumentError("unknown source norm '" + std::string(name) + "' (expected l2 or linf)");
}

std::string to_string(TargetNorm n) {
    switch (n) {
        case TargetNorm::l2: return "l2";
        case TargetNorm::linf: return "linf";
        case TargetNorm::l1: return "l1";
    }
    return "?";
}

std::string to_string(SourceNorm n) { return n == SourceNorm::l2 ? "l2" : "linf"; }

Grid::Grid(std::vector<double> o, std::vector<double> h, std::vector<long> s)
    : origin(std::move(o)), spacing(std::move(h)), shape(std::move(s)) {
    if (shape.empty()) {
        throw ArgumentError("grid dimension must be at least 1");
    }
    if (origin.size() != shape.size() || spacing.size() != shape.size()) {
        throw ArgumentError("grid origin, spacing and shape must have the same length");
    }
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (shape[k] < 2) {
            throw ArgumentError("grid shape entries must be at least 2");
        }
        if (!(spacing[k] > 0.0) || !std::isfinite(spacing[k])) {
            throw ArgumentError("grid spacing must be positive and finite");
        }
        if (!std::isfinite(origin[k])) {
            throw ArgumentError("grid origin must be finite");
        }
    }
}

Grid Grid::uniform(int dim, double lo, double hi, long points) {
    if (dim < 1 || points < 2 || !(hi > lo)) {
        throw ArgumentError("uniform grid needs dim >= 1, points >= 2 and hi > lo");
    }
    const double h = (hi - lo) / static_cast<double>(points - 1);
    return Grid(std::vector<double>(dim, lo), std::vector<double>(dim, h), std::vector<long>(dim, points));
}

std::size_t Grid::size() const noexcept {
    std::size_t n = 1;
    for (long s : shape) {
        n *= static_cast<std::size_t>(s);
    }
    return n;
}

std::vector<std::size_t> Grid::strides() const {
    std::vector<std::size_t> st(shape.size());
    std::size_t acc = 1;
    for (int k = dim() - 1; k >= 0; --k) {
        st[k] = acc;
        acc *= static_cast<std::size_t>(shape[k]);
    }
    return st;
}

std::size_t Grid::linear(std::span<const long> idx) const {
    if (static_cast<int>(idx.size()) != dim()) {
        throw ArgumentError("multi-index has wrong dimension");
    }
    std::size_t lin = 0;
    for (int k = 0; k < dim(); ++k) {
        if (idx[k] < 0 || idx[k] >= shape[k]) {
            throw DomainError("multi-index outside the grid");
        }
        lin = lin * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(idx[k]);
    }
    return lin;
}

Index Grid::multi(std::size_t lin) const {
    Index idx(shape.size());
    for (int k = dim() - 1; k >= 0; --k) {
        idx[k] = static_cast<long>(lin % static_cast<std::size_t>(shape[k]));
        lin /= static_cast<std::size_t>(shape[k]);
    }
    return idx;
}

Eigen::VectorXd Grid::point(std::size_t lin) const {
    const Index idx = multi(lin);
    Eigen::VectorXd x(dim());
    for (int k = 0; k < dim(); ++k) {
        x[k] = origin[k] + static_cast<double>(idx[k]) * spacing[k];
    }
    return x;
}

double Grid::h_min() const { return *std::min_element(spacing.begin(), spacing.end()); }
double Grid::h_max() const { return *std::max_element(spacing.begin(), spacing.end()); }

double Grid::diameter(SourceNorm norm) const {
    Index d(shape.size());
    for (int k = 0; k < dim(); ++k) {
        d[k] = shape[k] - 1;
    }
    return offset_distance(*this, norm, d);
}

double Grid::cell_diameter(SourceNorm norm) const {
    return offset_distance(*this, norm, Index(shape.size(), 1));
}

bool Grid::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != dim()) {
        return false;
    }
    for (int k = 0; k < dim(); ++k) {
        const double u = (x[k] - origin[k]) / spacing[k];
        if (!(u >= -tol && u <= static_cast<double>(shape[k] - 1) + tol)) {
            return false;
        }
    }
    return true;
}

GridFunction::GridFunction(Grid g, Values v, NormSpec n, std::string l)
    : grid(std::move(g)), values(std::move(v)), norms(n), label(std::move(l)) {
    if (static_cast<std::size_t>(values.rows()) != grid.size()) {
        throw ArgumentError("value count does not match the grid point count");
    }
    if (values.cols() < 1) {
        throw ArgumentError("target dimension must be at least 1");
    }
    if (!values.allFinite()) {
        throw ArgumentError("grid function values must be finite");
    }
}

double target_norm(TargetNorm kind, const double* v, int m) {
    double acc = 0.0;
    switch (kind) {
        case TargetNorm::l2:
            for (int c = 0; c < m; ++c) acc += v[c] * v[c];
            return std::sqrt(acc);
        case TargetNorm::linf:
            for (int c = 0; c < m; ++c) acc = std::max(acc, std::fabs(v[c]));
            return acc;
        case TargetNorm::l1:
            for (int c = 0; c < m; ++c) acc += std::fabs(v[c]);
            return acc;
    }
    return acc;
}

double target_distance(TargetNorm kind, const double* a, const double* b, int m) {
    if (m == 1) {
        return std::fabs(a[0] - b[0]);
    }
    double acc = 0.0;
    switch (kind) {
        case TargetNorm::l2:
            for (int c = 0; c < m; ++c) {
                const double d = a[c] - b[c];
                acc += d * d;
            }
            return std::sqrt(acc);
        case TargetNorm::linf:
            for (int c = 0; c < m; ++c) acc = std::max(acc, std::fabs(a[c] - b[c]));
            return acc;
        case TargetNorm::l1:
            for (int c = 0; c < m; ++c) acc += std::fabs(a[c] - b[c]);
            return acc;
    }
    return acc;
}

double source_norm(SourceNorm kind, const double* x, int n) {
    double acc = 0.0;
    if (kind == SourceNorm::l2) {
        for (int k = 0; k < n; ++k) acc += x[k] * x[k];
        return std::sqrt(acc);
    }
    for (int k = 0; k < n; ++k) acc = std::max(acc, std::fabs(x[k]));
    return acc;
}

double offset_distance(const Grid& g, SourceNorm kind, std::span<const long> d) {
    double comp[16];
    std::vector<double> heap;
    double* c = comp;
    if (d.size() > 16) {
        heap.resize(d.size());
        c = heap.data();
    }
    for (std::size_t k = 0; k < d.size(); ++k) {
        c[k] = static_cast<double>(std::labs(d[k])) * g.spacing[k];
    }
    return source_norm(kind, c, static_cast<int>(d.size()));
}

double point_norm(const Grid& g, SourceNorm kind, std::size_t linear) {
    const Eigen::VectorXd x = g.point(linear);
    return source_norm(kind, x.data(), static_cast<int>(x.size()));
}

namespace {

std::vector<double> parse_real_list(const std::string& s, std::size_t line) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        out.push_back(parse_real(item, line));
    }
    return out;
}

}  // namespace

GridFunction parse_grid_function(std::istream& in) {
    std::map<std::string, std::pair<std::string, std::size_t>> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t[0] == '#') {
            if (!rows.empty()) {
                throw ParseError(line_no, "header line after data rows");
            }
            const std::string body = trim(std::string_view(t).substr(1));
            const auto eq = body.find('=');
            if (eq == std::string::npos) {
                throw ParseError(line_no, "header line must be '# key=value'");
            }
            const std::string key = trim(std::string_view(body).substr(0, eq));
            static const char* known[] = {"dim", "shape", "origin", "spacing", "ycomp", "label"};
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
                std::end(known)) {
                throw ParseError(line_no, "unknown header key '" + key + "'");
            }
            if (!header.emplace(key, std::make_pair(trim(std::string_view(body).substr(eq + 1)), line_no)).second) {
                throw ParseError(line_no, "duplicate header key '" + key + "'");
            }
            continue;
        }
        rows.push_back(parse_real_list(t, line_no));
        row_lines.push_back(line_no);
    }
    for (const char* key : {"dim", "shape", "origin", "spacing"}) {
        if (!header.contains(key)) {
            throw ParseError(line_no, std::string("missing header key '") + key + "'");
        }
    }
    const auto& [dim_text, dim_line] = header.at("dim");
    const long long dim = parse_integer(dim_text, dim_line);
    std::vector<long> shape;
    for (const auto& item : split(header.at("shape").first, ',')) {
        shape.push_back(static_cast<long>(parse_integer(item, header.at("shape").second)));
    }
    const auto origin = parse_real_list(header.at("origin").first, header.at("origin").second);
    const auto spacing = parse_real_list(header.at("spacing").first, header.at("spacing").second);
    if (dim < 1 || static_cast<std::size_t>(dim) != shape.size()) {
        throw ParseError(header.at("shape").second, "shape does not match dim");
    }
    if (origin.size() != shape.size()) {
        throw ParseError(header.at("origin").second, "origin does not match dim");
    }
    if (spacing.size() != shape.size()) {
        throw ParseError(header.at("spacing").second, "spacing does not match dim");
    }
    long long ycomp = 1;
    if (header.contains("ycomp")) {
        ycomp = parse_integer(header.at("ycomp").first, header.at("ycomp").second);
        if (ycomp < 1) {
            throw ParseError(header.at("ycomp").second, "ycomp must be at least 1");
        }
    }
    Grid grid;
    try {
        grid = Grid(origin, spacing, shape);
    } catch (const ArgumentError& e) {
        throw ParseError(header.at("shape").second, e.what());
    }
    if (rows.size() != grid.size()) {
        throw ParseError(rows.size() < grid.size() ? line_no : row_lines[grid.size()],
                         "expected " + std::to_string(grid.size()) + " data rows, found " +
                             std::to_string(rows.size()));
    }
    Values values(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(ycomp));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != static_cast<std::size_t>(ycomp)) {
            throw ParseError(row_lines[i], "expected " + std::to_string(ycomp) + " values per row");
        }
        for (long long c = 0; c < ycomp; ++c) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    std::string label = header.contains("label") ? header.at("label").first : std::string();
    return GridFunction(std::move(grid), std::move(values), NormSpec{}, std::move(label));
}

GridFunction load_grid_function(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open " + path.string());
    }
    return parse_grid_function(in);
}

namespace {

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ',';
        out += format_real(v[k]);
    }
    return out;
}

}  // namespace

void write_grid_function(const GridFunction& f, std::ostream& out) {
    const Grid& g = f.grid;
    out << "# dim=" << g.dim() << '\n';
    out << "# shape=";
    for (int k = 0; k < g.dim(); ++k) {
        out << (k ? "," : "") << g.shape[k];
    }
    out << '\n';
    out << "# origin=" << join_reals(g.origin) << '\n';
    out << "# spacing=" << join_reals(g.spacing) << '\n';
    out << "# ycomp=" << f.ycomp() << '\n';
    if (!f.label.empty()) {
        out << "# label=" << f.label << '\n';
    }
    std::string row;
    for (std::size_t i = 0; i < f.size(); ++i) {
        row.clear();
        const double* v = f.at(i);
        for (int c = 0; c < f.ycomp(); ++c) {
            if (c) row += ',';
            row += format_real(v[c]);
        }
        row += '\n';
        out << row;
    }
}

void save_grid_function(const GridFunction& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ArgumentError("cannot write " + path.string());
    }
    write_grid_function(f, out);
}

Eigen::VectorXd eval_interp(const GridFunction& f, const Eigen::VectorXd& x) {
    const Grid& g = f.grid;
    const int n = g.dim();
    if (x.size() != n) {
        throw ArgumentError("interpolation point has wrong dimension");
    }
    std::vector<long> base(n);
    std::vector<double> frac(n, 0.0);
    std::vector<int> free_axes;
    for (int k = 0; k < n; ++k) {
        const double u = (x[k] - g.origin[k]) / g.spacing[k];
        const double top = static_cast<double>(g.shape[k] - 1);
        if (!(u >= -1e-9 && u <= top + 1e-9)) {
            throw DomainError("interpolation point outside the grid box");
        }
        const double r = std::round(u);
        if (std::fabs(u - r) <= 1e-9) {
            base[k] = std::clamp(static_cast<long>(r), 0L, g.shape[k] - 1);
            continue;
        }
        base[k] = std::clamp(static_cast<long>(std::floor(u)), 0L, g.shape[k] - 2);
        frac[k] = u - static_cast<double>(base[k]);
        free_axes.push_back(k);
    }
    const int m = f.ycomp();
    const auto strides = g.strides();
    std::size_t base_lin = 0;
    for (int k = 0; k < n; ++k) {
        base_lin += static_cast<std::size_t>(base[k]) * strides[k];
    }
    // corner values, then one lerp a + t(b − a) per free axis so equal corners reproduce exactly
    const std::size_t corners = std::size_t{1} << free_axes.size();
    std::vector<double> buf(corners * static_cast<std::size_t>(m));
    for (std::size_t mask = 0; mask < corners; ++mask) {
        std::size_t lin = base_lin;
        for (std::size_t a = 0; a < free_axes.size(); ++a) {
            if (mask & (std::size_t{1} << a)) {
                lin += strides[free_axes[a]];
            }
        }
        const double* v = f.at(lin);
        std::copy(v, v + m, buf.begin() + static_cast<std::ptrdiff_t>(mask * m));
    }
    for (std::size_t a = free_axes.size(); a-- > 0;) {
        const std::size_t half = std::size_t{1} << a;
        const double t = frac[free_axes[a]];
        for (std::size_t j = 0; j < half * m; ++j) {
            buf[j] += t * (buf[j + half * m] - buf[j]);
        }
    }
    Eigen::VectorXd out(m);
    for (int c = 0; c < m; ++c) {
        out[c] = buf[static_cast<std::size_t>(c)];
    }
    return out;
}

double pair_oscillation(const GridFunction& f, const Modulus& m, std::span<const long> i, std::span<const long> j) {
    const std::size_t li = f.grid.linear(i);
    const std::size_t lj = f.grid.linear(j);
    if (li == lj) {
        throw ArgumentError("pair_oscillation needs two distinct points");
    }
    Index d(i.size());
    for (std::size_t k = 0; k < i.size(); ++k) {
        d[k] = i[k] - j[k];
    }
    const double num = target_distance(f.norms.target, f.at(li), f.at(lj), f.ycomp());
    return num / m(offset_distance(f.grid, f.norms.source, d));
}

double pair_oscillation(const GridFunction& f, const Modulus& m, std::size_t i, std::size_t j) {
    const Index a = f.grid.multi(i);
    const Index b = f.grid.multi(j);
    return pair_oscillation(f, m, a, b);
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid) || f.ycomp() != g.ycomp()) {
        throw ArgumentError("functions live on different grids");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        best = std::max(best, target_distance(f.norms.target, f.at(i), g.at(i), f.ycomp()));
    }
    return best;
}

double sup_norm(const GridFunction& f) {
    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        best = std::max(best, target_norm(f.norms.target, f.at(i), f.ycomp()));
    }
    return best;
}

GridFunction difference(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid) || f.ycomp() != g.ycomp()) {
        throw ArgumentError("functions live on different grids");
    }
    GridFunction out = f;
    out.values = f.values - g.values;
    return out;
}

}  // namespace holder
