#include "problem_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nme::cli {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FileError(std::string("malformed JSON: ") + e.what());
    }
}

const json& require(const json& doc, const char* key) {
    if (!doc.is_object()) throw FileError("top level must be an object");
    auto it = doc.find(key);
    if (it == doc.end()) throw FileError(std::string("missing field \"") + key + "\"");
    return *it;
}

double read_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw FileError(where + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FileError(where + ": value is not finite");
    return d;
}

std::size_t read_dimension(const json& doc) {
    const json& n = require(doc, "n");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw FileError("n: expected a positive integer");
    return static_cast<std::size_t>(n.get<long long>());
}

std::string entry_where(const char* name, std::size_t i, std::size_t j) {
    return std::string(name) + "[row " + std::to_string(i) + ", col " + std::to_string(j) + "]";
}

Packed read_matrix(const json& doc, const char* name, std::size_t n) {
    const json& m = require(doc, name);
    if (!m.is_array() || m.size() != n) {
        throw FileError(std::string(name) + ": expected " + std::to_string(n) + " rows");
    }
    Packed out(n * n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = m[i];
        if (!row.is_array() || row.size() != n) {
            throw FileError(std::string(name) + "[row " + std::to_string(i) + "]: expected " + std::to_string(n) +
                            " entries (matrix must be square, n x n)");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const json& e = row[j];
            const std::string where = entry_where(name, i, j);
            double re = 0;
            double im = 0;
            if (e.is_array()) {
                if (e.size() != 2) throw FileError(where + ": complex entry must be [re, im]");
                re = read_number(e[0], where);
                im = read_number(e[1], where);
            } else {
                re = read_number(e, where);
            }
            out[(i * n + j) * 2] = re;
            out[(i * n + j) * 2 + 1] = im;
        }
    }
    return out;
}

void append_matrix(std::string& out, const char* name, const Packed& m, std::size_t n, bool last) {
    out += "  \"";
    out += name;
    out += "\": [\n";
    for (std::size_t i = 0; i < n; ++i) {
        out += "    [";
        for (std::size_t j = 0; j < n; ++j) {
            out += "[" + format_number(m[(i * n + j) * 2]) + ", " + format_number(m[(i * n + j) * 2 + 1]) + "]";
            if (j + 1 < n) out += ", ";
        }
        out += i + 1 < n ? "],\n" : "]\n";
    }
    out += last ? "  ]\n" : "  ],\n";
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ProblemFile parse_problem(const std::string& text) {
    const json doc = parse_json(text);
    ProblemFile f;
    f.n = read_dimension(doc);
    f.s = read_number(require(doc, "s"), "s");
    f.t = read_number(require(doc, "t"), "t");
    f.p = read_number(require(doc, "p"), "p");
    f.a = read_matrix(doc, "A", f.n);
    f.b = read_matrix(doc, "B", f.n);
    f.q = read_matrix(doc, "Q", f.n);
    return f;
}

std::string write_problem(const ProblemFile& f) {
    std::string out = "{\n";
    out += "  \"n\": " + std::to_string(f.n) + ",\n";
    out += "  \"s\": " + format_number(f.s) + ",\n";
    out += "  \"t\": " + format_number(f.t) + ",\n";
    out += "  \"p\": " + format_number(f.p) + ",\n";
    append_matrix(out, "A", f.a, f.n, false);
    append_matrix(out, "B", f.b, f.n, false);
    append_matrix(out, "Q", f.q, f.n, true);
    out += "}\n";
    return out;
}

SolutionFile parse_solution(const std::string& text) {
    const json doc = parse_json(text);
    SolutionFile f;
    f.n = read_dimension(doc);
    f.x = read_matrix(doc, "X", f.n);
    if (doc.contains("Y")) f.y = read_matrix(doc, "Y", f.n);
    return f;
}

std::string write_solution(const SolutionFile& f) {
    std::string out = "{\n";
    out += "  \"n\": " + std::to_string(f.n) + ",\n";
    append_matrix(out, "X", f.x, f.n, !f.y.has_value());
    if (f.y) append_matrix(out, "Y", *f.y, f.n, true);
    out += "}\n";
    return out;
}

FactorizationFile parse_factorization(const std::string& text) {
    const json doc = parse_json(text);
    FactorizationFile f;
    f.n = read_dimension(doc);
    f.u = read_matrix(doc, "U", f.n);
    const json& lam = require(doc, "Lambda");
    if (!lam.is_array() || lam.size() != f.n) {
        throw FileError("Lambda: expected " + std::to_string(f.n) + " entries");
    }
    for (std::size_t i = 0; i < f.n; ++i) f.lambda.push_back(read_number(lam[i], "Lambda[" + std::to_string(i) + "]"));
    f.n1 = read_matrix(doc, "N1", f.n);
    f.n2 = read_matrix(doc, "N2", f.n);
    return f;
}

std::string write_factorization(const FactorizationFile& f) {
    std::string out = "{\n";
    out += "  \"n\": " + std::to_string(f.n) + ",\n";
    append_matrix(out, "U", f.u, f.n, false);
    out += "  \"Lambda\": [";
    for (std::size_t i = 0; i < f.lambda.size(); ++i) {
        out += format_number(f.lambda[i]);
        if (i + 1 < f.lambda.size()) out += ", ";
    }
    out += "],\n";
    append_matrix(out, "N1", f.n1, f.n, false);
    append_matrix(out, "N2", f.n2, f.n, true);
    out += "}\n";
    return out;
}

std::string write_history_csv(const std::vector<HistoryCsvRow>& rows) {
    std::string out = "iteration,step_error_X,step_error_Y\n";
    for (const auto& r : rows) {
        out += std::to_string(r.iteration) + "," + format_number(r.step_x) + "," + format_number(r.step_y) + "\n";
    }
    return out;
}

std::vector<HistoryCsvRow> parse_history_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "iteration,step_error_X,step_error_Y") {
        throw FileError("history CSV: unexpected header");
    }
    std::vector<HistoryCsvRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        HistoryCsvRow r{};
        if (std::sscanf(line.c_str(), "%d,%lf,%lf", &r.iteration, &r.step_x, &r.step_y) != 3) {
            throw FileError("history CSV line " + std::to_string(line_no) + ": expected three fields");
        }
        rows.push_back(r);
    }
    return rows;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + path);
    out << text;
    if (!out) throw FileError("write failed: " + path);
}

}  // namespace nme::cli
