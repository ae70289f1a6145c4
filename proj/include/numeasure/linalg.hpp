#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace numeasure {

using Complex = std::complex<double>;

// Dense complex square matrix, row-major storage.
struct SquareMatrix {
    int n = 0;
    std::vector<Complex> a; // n*n entries, row-major

    SquareMatrix() = default;
    explicit SquareMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}

    Complex& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const Complex& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static SquareMatrix zero(int n) { return SquareMatrix(n); }
    static SquareMatrix identity(int n);
    static SquareMatrix diagonal(const std::vector<Complex>& d);
    static SquareMatrix from_rows(const std::vector<std::vector<Complex>>& rows);
    static SquareMatrix from_real_rows(const std::vector<std::vector<double>>& rows);

    SquareMatrix adjoint() const;
    SquareMatrix scaled(Complex c) const;
    SquareMatrix plus(const SquareMatrix& other) const;
    SquareMatrix times(const SquareMatrix& other) const;
    std::vector<Complex> apply(std::span<const Complex> x) const;

    Complex trace() const;
    double frobenius_norm() const;
    bool is_hermitian(double tol) const;
};

// Hermitian pair (a1, a2) with a1 + i*a2 equal to the source matrix;
// a1*cos(theta) + a2*sin(theta) sweeps the associated Hermitian family.
struct Pencil {
    SquareMatrix a1;
    SquareMatrix a2;
    int n() const { return a1.n; }
};

struct EigenDecomposition {
    std::vector<double> values; // ascending
    SquareMatrix vectors;       // columns are orthonormal eigenvectors
};

struct MatrixStats {
    Complex trace;
    double frobenius_sq;     // Tr(A*A)
    Complex trace_a_squared; // Tr(A^2)
    bool is_normal;
};

// a1 = (A + A*)/2 and a2 = (A - A*)/(2i), symmetrized entry-by-entry so the
// results are Hermitian exactly (real diagonal, mirrored off-diagonals).
Pencil make_pencil(const SquareMatrix& A);

// a1*cos(theta) + a2*sin(theta); exactly Hermitian by construction.
SquareMatrix h_theta(const Pencil& P, double theta);

// d/dtheta of h_theta: -a1*sin(theta) + a2*cos(theta).
SquareMatrix h_theta_derivative(const Pencil& P, double theta);

// Cyclic Jacobi sweeps on a complex Hermitian matrix. Terminates when the
// off-diagonal Frobenius mass drops below tol_eig * ||H||_F. Throws
// NumericalError with the residual if the sweep budget is exhausted,
// PreconditionError if H is not Hermitian within the tolerance.
EigenDecomposition hermitian_eigen(const SquareMatrix& H, double tol_eig = 1e-12);

// <Ax, x> = x* A x for a unit vector x (scalar product conjugates the second
// argument). Throws PreconditionError unless | ||x|| - 1 | <= 1e-12.
Complex numerical_map(const SquareMatrix& A, std::span<const Complex> x);

MatrixStats matrix_stats(const SquareMatrix& A);

// Matrix input format shared repo-wide:
//   {"n": int, "entries": [[[re,im],...],...]}   (row-major)
//   {"n": int, "real_entries": [[...],...]}
// Throws PreconditionError on malformed input.
SquareMatrix parse_matrix_json(const std::string& text);
SquareMatrix load_matrix_file(const std::string& path);
std::string matrix_to_json(const SquareMatrix& A);

} // namespace numeasure
