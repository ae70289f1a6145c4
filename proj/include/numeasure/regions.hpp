#pragma once

#include "numeasure/grid.hpp"
#include "numeasure/linalg.hpp"
#include "numeasure/spectral.hpp"

#include <vector>

namespace numeasure {

// Coefficients (ascending degree) of the polynomial whose unit-circle roots
// count the tangent lines to the critical curve through z. Degree is n for
// z outside the spectrum; deficits are tracked, not hidden.
struct DeltaPoly {
    std::vector<Complex> coeffs; // n+1 entries as interpolated
    Complex z;
    int leading_deficit = 0;  // coefficients dropped at the top (roots at infinity)
    int trailing_deficit = 0; // zero roots split off at w = 0
};

// Recovers the coefficients by evaluating the determinant at n+1 nodes on the
// circle |w| = 1.1 (LU with partial pivoting) and solving the Vandermonde
// system.
DeltaPoly delta_poly(const SquareMatrix& A, Complex z);

// Determinant evaluation backing delta_poly, exposed for cross-checks:
// det(A/2 + w A*/2 - (x(w+1)/2 + y(w-1)/(2i)) I).
Complex delta_eval(const SquareMatrix& A, Complex z, Complex w);

// det(H(theta) - Re(z e^{-i theta}) I): the angle form of the same object.
double delta_angle_form(const Pencil& P, Complex z, double theta);

// Aberth-Ehrlich simultaneous root iteration. Leading coefficients smaller
// than 1e-12 * max|c_k| are stripped (the deficit is reported through
// DeltaPoly); convergence requires |p(w)| <= tol_root * max|c_k| at every
// root. Deterministic: fixed initial circle, fixed sweep order.
std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs, double tol_root = 1e-10);

// Number of unit-circle roots of the tangent polynomial, multiplicities
// included. Throws AmbiguousNearSingularSet when a root falls inside the
// guard annulus tol_circle < | |w| - 1 | < 3*tol_circle.
int tangent_count(const SquareMatrix& A, Complex z, double tol_circle = 1e-6);

// Support-line membership test against the sampled eigencurve table.
bool in_numerical_range(const EigencurveTable& T, Complex z);

struct RegionMap {
    GridSpec grid;
    std::vector<int> n_tangents;      // N(z) per lattice point, -1 when ambiguous
    std::vector<unsigned char> inside; // support-line test
    std::vector<unsigned char> pi_mask; // N(z) == n
    int dim = 0;

    int ambiguous_count() const;
};

RegionMap classify_grid(const SquareMatrix& A, const EigencurveTable& T, const GridSpec& grid,
                        double tol_circle = 1e-6, int threads = 0);

// Connected components (4-neighbor) of equal-N cells, ambiguous cells
// excluded. Returns a label per cell (-1 for ambiguous) and the component
// count.
struct RegionComponents {
    std::vector<int> label;
    int count = 0;
    std::vector<int> component_n; // N value per component
    std::vector<int> sizes;
};
RegionComponents region_components(const RegionMap& map);

} // namespace numeasure
