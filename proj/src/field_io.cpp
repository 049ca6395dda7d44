#include "rkit/field_io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rkit {

namespace {

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_real(const std::string& tok, std::size_t line) {
    const std::string t = trim(tok);
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x))
        throw ParseError("line " + std::to_string(line) + ": bad number '" + t + "'");
    return x;
}

std::vector<std::vector<double>> parse_rows(const std::string& text, const std::string& header,
                                            std::size_t cols) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool seen_header = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            std::string compact;
            for (char c : line)
                if (c != ' ') compact += c;
            if (compact != header)
                throw ParseError("expected CSV header '" + header + "', got '" + line + "'");
            seen_header = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) row.push_back(parse_real(tok, lineno));
        if (row.size() != cols)
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " columns");
        rows.push_back(std::move(row));
    }
    if (!seen_header) throw ParseError("missing CSV header '" + header + "'");
    if (rows.empty()) throw ParseError("CSV has no data rows");
    return rows;
}

// Uniform axis from sorted distinct coordinates.
void check_uniform(const std::vector<double>& xs, double& x0, double& h) {
    x0 = xs.front();
    if (xs.size() == 1) {
        h = 1.0;
        return;
    }
    h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = xs[i] - xs[i - 1];
        if (std::fabs(d - h) > 1e-9 * h) throw GridError("CSV grid spacing is not uniform");
    }
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Field1D parse_field1d_csv(const std::string& text) {
    const auto rows = parse_rows(text, "x,value", 2);
    std::vector<double> xs;
    std::vector<double> vs;
    for (const auto& r : rows) {
        xs.push_back(r[0]);
        vs.push_back(r[1]);
    }
    if (!std::is_sorted(xs.begin(), xs.end()) ||
        std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        throw GridError("CSV x column must be strictly increasing");
    double x0 = 0.0;
    double h = 1.0;
    check_uniform(xs, x0, h);
    return Field1D(Grid1D(x0, h, xs.size()), std::move(vs));
}

Field1D load_field1d_csv(const std::string& path) { return parse_field1d_csv(read_all(path)); }

Field2D parse_field2d_csv(const std::string& text) {
    const auto rows = parse_rows(text, "x,y,value", 3);
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        xs.push_back(r[0]);
        ys.push_back(r[1]);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    if (xs.size() * ys.size() != rows.size()) throw GridError("CSV points do not form a rectangle");
    double x0, hx, y0, hy;
    check_uniform(xs, x0, hx);
    check_uniform(ys, y0, hy);
    if (xs.size() == 1) hx = hy;
    if (ys.size() == 1) hy = hx;
    Grid2D g(x0, y0, hx, hy, xs.size(), ys.size());
    std::vector<double> v(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = k % g.nx;
        const std::size_t j = k / g.nx;
        if (rows[k][0] != xs[i] || rows[k][1] != ys[j])
            throw GridError("CSV rows must be row-major with x varying fastest");
        v[k] = rows[k][2];
    }
    return Field2D(g, std::move(v));
}

Field2D load_field2d_csv(const std::string& path) { return parse_field2d_csv(read_all(path)); }

std::string format_field_csv(const Field1D& u) {
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        out += format_real(u.grid.center(i)) + "," + format_real(u.values[i]) + "\n";
    return out;
}

std::string format_field_csv(const Field2D& u) {
    std::string out = "x,y,value\n";
    for (std::size_t j = 0; j < u.grid.ny; ++j)
        for (std::size_t i = 0; i < u.grid.nx; ++i)
            out += format_real(u.grid.cx(i)) + "," + format_real(u.grid.cy(j)) + "," +
                   format_real(u.at(i, j)) + "\n";
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) throw Error("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

void save_field_csv(const std::string& path, const Field1D& u) {
    write_file_atomic(path, format_field_csv(u));
}

void save_field_csv(const std::string& path, const Field2D& u) {
    write_file_atomic(path, format_field_csv(u));
}

void emit_plot_data(const std::string& path, const std::vector<std::string>& columns,
                    const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + format_real(r[c]);
        out += "\n";
    }
    write_file_atomic(path, out);
}

}  // namespace rkit
