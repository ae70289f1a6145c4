#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace numeasure {

// Ascending knot sequence. Construction regularizes near-coincident knots:
// any cluster with gaps below sep_min = 1e-9 * (range) is spread symmetrically
// about its mean to exactly sep_min spacing, so the distinct-knot divided
// difference formula stays usable while the represented measure moves by
// O(sep_min) only.
struct KnotVector {
    std::vector<double> knots;

    static KnotVector regularized(std::vector<double> values);

    int size() const { return static_cast<int>(knots.size()); }
    double front() const { return knots.front(); }
    double back() const { return knots.back(); }
    double range() const { return knots.back() - knots.front(); }
};

// Piecewise polynomial, one coefficient list per interval between consecutive
// breakpoints, in the local variable u = x - (left breakpoint). Dirac atoms
// carry the degree -1 parts that appear when differentiating a discontinuous
// piece (location, weight).
struct PiecewisePoly {
    std::vector<double> breakpoints;
    std::vector<std::vector<double>> coeffs; // coeffs[i][m] multiplies u^m
    std::vector<std::pair<double, double>> dirac_atoms;

    double evaluate(double x) const;
    int pieces() const { return static_cast<int>(coeffs.size()); }
    double max_abs() const;
};

// Sum of g(k_j) / prod_{l != j} (k_j - k_l) over the knots; the leading
// coefficient of the interpolating polynomial. Throws PreconditionError on
// duplicate knots (regularize first).
double divided_difference(const KnotVector& knots, const std::vector<double>& g_values);

// Normalized compactly supported spline of degree n-2 with the given n >= 2
// knots: unit integral, positive strictly inside the knot span, zero outside.
// For n = 2 this is the indicator of [k1, k2] scaled by 1/(k2 - k1).
PiecewisePoly bspline_build(const KnotVector& knots);

// Distributional derivative: piecewise derivative plus Dirac atoms at
// breakpoints where the input jumps. Total signed mass (atoms + pieces)
// is zero for any compactly supported input.
PiecewisePoly bspline_derivative(const PiecewisePoly& B);

// Closed-form Hilbert transform of B' evaluated off the knots:
//   atoms (w at t0)            -> w / (pi (s - t0))
//   polynomial piece p on [a,b]-> ( Q_p(s) + p(s) ln|s-a| - p(s) ln|s-b| )/pi
// where Q_p collects the polynomial part of the principal value integral.
// Throws NearKnotEvaluation when s is within knot_guard of a knot.
double hilbert_of_derivative(const KnotVector& knots, double s);

// Prepared evaluator: builds the spline derivative once, then evaluates the
// transform at many points. guarded() falls back to a principal-value
// quadrature of the odd part inside the near-knot band.
class HilbertEvaluator {
public:
    explicit HilbertEvaluator(KnotVector knots);

    double closed_form(double s) const; // throws NearKnotEvaluation in the band
    double guarded(double s) const;     // finite everywhere off atoms
    bool in_guard_band(double s) const;

    const KnotVector& knots() const { return knots_; }
    double guard() const { return guard_; }

private:
    double closed_form_unchecked(double s) const;
    double quadrature_fallback(double s) const;

    KnotVector knots_;
    PiecewisePoly deriv_;
    double guard_;
};

inline double knot_guard_width(const KnotVector& k) { return 1e-7 * k.range(); }

} // namespace numeasure
