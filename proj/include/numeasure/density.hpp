#pragma once

#include "numeasure/bspline.hpp"
#include "numeasure/grid.hpp"
#include "numeasure/linalg.hpp"
#include "numeasure/regions.hpp"
#include "numeasure/rng.hpp"
#include "numeasure/spectral.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace numeasure {

// Homogeneous differential operator of degree n-2:
//   sum_k c_k d_x^{n-2-k} d_y^k.
struct DiffOperator {
    int degree = 0;
    std::vector<double> coefficients; // degree+1 entries

    static DiffOperator identity() { return {0, {1.0}}; }
    static DiffOperator monomial(int degree, int k); // d_x^{degree-k} d_y^k
};

// Backprojection over the sampled eigencurve table: the angular average of
// the Hilbert-transformed projection derivatives. Prepares one Hilbert
// evaluator per angle and reuses it across evaluation points.
struct DensityPointResult {
    double value = 0.0;
    // Disagreement between the two half-resolution angular grids: an error
    // indicator that blows up for points on the singular support.
    double half_grid_diff = 0.0;
    int guarded_angles = 0;
};

class BackprojectionEvaluator {
public:
    BackprojectionEvaluator(const EigencurveTable& T, int threads = 0);

    double density(Complex z) const;
    // Same value plus the number of angles that needed the guarded fallback.
    double density(Complex z, int* guarded_angles) const;
    DensityPointResult density_detail(Complex z) const;

private:
    double angle_value(int i, Complex z, int* guarded) const;

    const EigencurveTable& table_;
    std::vector<HilbertEvaluator> per_angle_;
    std::vector<double> cos_, sin_;
    // Angles whose knot vector nearly degenerates (eigenvalue crossing on the
    // sample): their integrand is replaced by the neighbor average, which the
    // principal-value cancellation makes exact in the limit.
    std::vector<unsigned char> degenerate_;
};

// Pointwise density by backprojection. Throws QuasiHermitianInput when the
// critical points are collinear (use hermitian_density on the rotated
// matrix instead).
double density_at(const SquareMatrix& A, const EigencurveTable& T, Complex z);

// One-dimensional density of a Hermitian matrix: the normalized spline over
// its eigenvalues. Throws QuasiHermitianInput for scalar spectra (Dirac
// measure, no density).
double hermitian_density(const KnotVector& eigenvalues, double x);

struct DensityGrid {
    GridSpec grid;
    std::vector<double> values;
    double mass = 0.0;
    int nan_count = 0;
    int guarded_evals = 0;

    double value(int i, int j) const { return values[grid.index(i, j)]; }
};

// Grid driver: parallel evaluation, support clamped to exactly zero outside
// the support-line hull, trapezoidal mass.
DensityGrid density_grid(const SquareMatrix& A, const EigencurveTable& T, const GridSpec& grid,
                         int threads = 0);

// Default evaluation window: support-function bounding box padded 10%.
GridSpec default_density_box(const EigencurveTable& T, int nx, int ny);

struct ResidueDetail {
    double value = 0.0;
    double imag_residual = 0.0; // health check, should be ~0
    int circle_roots = 0;
    int interior_roots = 0;
};

// (P f_A)(z) for a degree n-2 operator P, by residue evaluation over the
// two circle contours: interior roots weigh 2, simple unit-circle roots
// weigh 1. Throws AmbiguousNearSingularSet on (near-)multiple circle roots.
ResidueDetail derivative_residue_detail(const SquareMatrix& A, Complex z, const DiffOperator& P,
                                        double tol_circle = 1e-6);
double derivative_residue(const SquareMatrix& A, Complex z, const DiffOperator& P,
                          double tol_circle = 1e-6);

enum class ClosedFormCase { ellipse2x2, jordan2, a3_radial, reducible3 };

struct ClosedFormParams {
    double b = 1.0, c = 0.0; // ellipse2x2
    double a = 0.0;          // reducible3
};

// Exact reference densities for the built-in families; zero outside their
// stated support.
double closed_form_density(ClosedFormCase which, const ClosedFormParams& params, Complex z);

// Radial profile reconstruction F_A(s) = (1/pi) d/ds int_0^s F_H(s-t)/sqrt(t) dt,
// with the inner integral desingularized by t = u^2 and the outer derivative
// by central differences at step 1e-4 * r_squared_max. Throws
// PreconditionError when s is outside [h, r_squared_max - h].
double radial_reconstruct(const std::function<double(double)>& F_H, double r_squared_max,
                          double s);

// Direct-sum sampling: t z' + (1-t) z'' with t ~ Beta(p, q) and z', z''
// uniform over the two sample sets.
std::vector<Complex> direct_sum_sample(const std::vector<Complex>& samples_a,
                                       const std::vector<Complex>& samples_b, int p, int q,
                                       CounterRng& rng, std::size_t count);

// Residual of the direct-sum characteristic-function identity at frequency
// xi, with empirical characteristic functions and 64-point Gauss-Legendre
// quadrature in t.
double direct_sum_fourier_check(const std::vector<Complex>& samples_a,
                                const std::vector<Complex>& samples_b,
                                const std::vector<Complex>& samples_ab, int p, int q,
                                Complex xi);

// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace numeasure
