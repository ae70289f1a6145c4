#pragma once

#include "numeasure/linalg.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace numeasure {

// Named ground truth attached to a built-in matrix. Truths store formula
// closures rather than precomputed floats so tolerance policy stays with the
// tests that consume them.
struct FixtureTruth {
    std::string description;
    std::function<double(Complex)> density;   // closed-form planar density
    std::function<double(double)> branch;     // eigenvalue branch at theta
    std::function<Complex(double)> curve;     // parametric curve point
    std::vector<Complex> points;
    double scalar = 0.0;
    bool has_scalar = false;
};

struct Fixture {
    std::string name;
    SquareMatrix matrix;
    std::map<std::string, FixtureTruth> truths;
};

// Accepts "name" or "name(p1,p2,...)" with real parameters:
//   a2_jordan, a3_shift(a,b), ellipse(b,c), generic3, cardioid,
//   reducible(a), normal3(x1,y1,x2,y2,x3,y3).
// Throws PreconditionError for unknown names or out-of-domain parameters.
Fixture get_fixture(const std::string& spec);

std::vector<std::string> fixture_names();

} // namespace numeasure
