#pragma once

// The two worked instances used as regression fixtures: the matrices exactly
// as published, the published solutions, and the start parameter used there.

#include "nme/problem.hpp"

namespace nme::examples {

struct Worked {
    Matrix a;
    Matrix b;
    Matrix q;
    double s;
    double t;
    double p;
    Matrix solution_y;  // transformed variable: X^s (first) or X^t (second)
    Matrix solution_x;
    double start;       // alpha for the first instance, b for the second
};

/// X^3 + A* X^-2 A + B* X^-1 B = 2I, fixed-point scheme from alpha = 1.
const Worked& first();

/// X^3 + A* X^-4 A + B* X^-1 B = Q, coupled scheme from b = 1.
const Worked& second();

/// id is 1 or 2; anything else throws ValidationError.
const Worked& by_id(int id);

ProblemInstance instance(const Worked& w);

}  // namespace nme::examples
