#pragma once

// Problem, solution and factorization files (JSON) and history CSV.
//
// Problem file:
//   { "n": 3, "s": 3, "t": 2, "p": 1,
//     "A": [[a11, a12, a13], ...], "B": [...], "Q": [...] }
// Each entry is a number (real) or a pair [re, im]. Files are written with
// every entry as a pair and 17 significant digits.
//
// Solution file: { "n": 3, "X": [...], "Y": [...] }, same matrix encoding;
// "Y" is optional on input.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nme::cli {

// Matrices are n*n*2 doubles, row-major with re/im interleaved (the C API layout).
using Packed = std::vector<double>;

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemFile {
    std::size_t n = 0;
    double s = 0;
    double t = 0;
    double p = 0;
    Packed a;
    Packed b;
    Packed q;
};

struct SolutionFile {
    std::size_t n = 0;
    Packed x;
    std::optional<Packed> y;
};

struct FactorizationFile {
    std::size_t n = 0;
    Packed u;
    std::vector<double> lambda;
    Packed n1;
    Packed n2;
};

struct HistoryCsvRow {
    int iteration;
    double step_x;
    double step_y;
};

ProblemFile parse_problem(const std::string& text);
std::string write_problem(const ProblemFile& f);

SolutionFile parse_solution(const std::string& text);
std::string write_solution(const SolutionFile& f);

FactorizationFile parse_factorization(const std::string& text);
std::string write_factorization(const FactorizationFile& f);

std::string write_history_csv(const std::vector<HistoryCsvRow>& rows);
std::vector<HistoryCsvRow> parse_history_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// "%.17g"
std::string format_number(double v);

}  // namespace nme::cli
