#include "nme/examples.hpp"

#include <string>

namespace nme::examples {

namespace {

Matrix real3(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(3, 3);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = Complex(v, 0.0);
        ++i;
    }
    return m;
}

Worked make_first() {
    Worked w;
    w.q = real3({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}});
    w.a = real3({{0.02, -0.1, -0.02}, {0.08, -0.1, 0.02}, {-0.06, -0.12, 0.14}});
    w.b = real3({{-0.04, 0.01, -0.02}, {0.05, 0.07, -0.013}, {0.011, 0.09, 0.06}});
    w.s = 3;
    w.t = 2;
    w.p = 1;
    w.solution_y = real3({{1.990011507887876, -0.001460413784344, 0.003932548667216},
                          {-0.001460413784344, 1.967817699120152, 0.007205717778742},
                          {0.003932548667216, 0.007205717778742, 1.983761175394282}});
    w.solution_x = real3({{1.257819473237711, -0.000309853059784, 0.000829790450201},
                          {-0.000309853059784, 1.253124679713870, 0.001525655417243},
                          {0.000829790450201, 0.001525655417243, 1.256499440822798}});
    w.start = 1.0;
    return w;
}

Worked make_second() {
    Worked w;
    w.q = real3({{7.5, 0, 1}, {0, 7.5, 1}, {1, 1, 8.5}});
    w.a = real3({{2.11, 0.01, 0.01}, {-0.05, 1.98, -0.18}, {0.1, 0.19, 2.38}});
    w.b = real3({{-0.09, 0.01, 0.01}, {-0.01, -0.15, -0.09}, {0.04, 0.1, -0.94}});
    w.s = 3;
    w.t = 4;
    w.p = 1;
    w.solution_y = real3({{0.678793416023482, 0.017053803392642, -0.094857343070291},
                          {0.017053803392642, 0.622769611868454, -0.138376527663483},
                          {-0.094857343070291, -0.138376527663483, 0.872777116839001}});
    w.solution_x = real3({{0.906231149966594, 0.003723228318032, -0.028702574652700},
                          {0.003723228318032, 0.884927869436603, -0.043501905340609},
                          {-0.028702574652700, -0.043501905340609, 0.962538505271393}});
    w.start = 1.0;
    return w;
}

}  // namespace

const Worked& first() {
    static const Worked w = make_first();
    return w;
}

const Worked& second() {
    static const Worked w = make_second();
    return w;
}

const Worked& by_id(int id) {
    if (id == 1) return first();
    if (id == 2) return second();
    throw ValidationError("unknown example id " + std::to_string(id) + " (expected 1 or 2)");
}

ProblemInstance instance(const Worked& w) { return ProblemInstance::create(w.a, w.b, w.q, w.s, w.t, w.p); }

}  // namespace nme::examples
