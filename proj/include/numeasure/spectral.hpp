#pragma once

#include "numeasure/linalg.hpp"

#include <vector>

namespace numeasure {

// Eigenvalues and their theta-derivatives at one angle, ascending. Inside a
// numerically degenerate eigenvalue group the derivatives come from
// diagonalizing the restriction of dH/dtheta to the group, sorted ascending.
struct CurveSample {
    std::vector<double> lambda;
    std::vector<double> dlambda;
};

CurveSample eval_curves(const Pencil& P, double theta, double group_tol = 0.0);

// Sampled eigenvalue curves on a uniform theta grid over [0, 2pi).
// Branch labels are by ascending sort at each theta.
struct EigencurveTable {
    Pencil pencil;
    std::vector<double> thetas;
    std::vector<double> lambdas;  // samples x n, row-major, row-sorted
    std::vector<double> dlambdas; // Hellmann-Feynman derivatives
    int dim = 0;
    double spectral_diameter = 0.0; // max lambda - min lambda over the table
    bool collinear = false;         // critical-point cloud degenerates to a line

    int samples() const { return static_cast<int>(thetas.size()); }
    double theta(int i) const { return thetas[i]; }
    double lambda(int i, int j) const { return lambdas[static_cast<std::size_t>(i) * dim + j]; }
    double dlambda(int i, int j) const { return dlambdas[static_cast<std::size_t>(i) * dim + j]; }
};

// Builds the table with n_theta uniform samples (n_theta >= 64, even).
EigencurveTable sample_curves(const Pencil& P, int n_theta);

struct CriticalPoint {
    int branch;
    double theta;
    Complex z;
};

// One point per (branch, theta sample): z = e^{i theta} (lambda + i lambda').
std::vector<CriticalPoint> critical_points(const EigencurveTable& T);

struct CrossingEvent {
    double theta;
    int j, p;     // adjacent sorted slots that meet
    double value; // shared eigenvalue at the crossing
    double dlambda_low, dlambda_high;
};

struct BitangentSegment {
    Complex a, b;
    double theta;
};

struct CrossingReport {
    std::vector<CrossingEvent> events;     // all events over [0, 2pi)
    std::vector<BitangentSegment> segments; // deduplicated (antipodal copies merged)
};

// Locates isolated eigenvalue crossings: local minima of adjacent sorted-gap
// profiles are refined by golden-section search and accepted when the gap
// closes below tol_cross (default 1e-7 * spectral diameter).
CrossingReport detect_crossings(const EigencurveTable& T, double tol_cross = 0.0);

struct CycleStructure {
    std::vector<int> tau;                 // permutation on distinct curves, 0-based
    std::vector<std::vector<int>> cycles; // disjoint cycle index sets
    std::vector<int> lengths;
    std::vector<int> multiplicities;      // eigenvalue multiplicity per cycle
    std::vector<bool> point_component;    // cycle's curve collapses to one point
    int distinct = 0;                     // number of distinct eigenvalue curves
};

// Recovers the antipodal branch permutation combinatorially: distinct curves
// are identified at a crossing-free angle, crossing events swap adjacent
// curves in value order, and matching against the negated antipodal values
// closes the permutation. Throws NumericalError when no crossing-free sample
// separates the curves ("cycle structure undetermined").
CycleStructure cycle_structure(const EigencurveTable& T, double tol_match = 0.0);

// lambda_max(theta), linearly interpolated between samples.
double support_function(const EigencurveTable& T, double theta);

} // namespace numeasure
