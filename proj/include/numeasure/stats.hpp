#pragma once

#include "numeasure/linalg.hpp"
#include "numeasure/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace numeasure {

// Uniform draw from the complex unit sphere: 2n standard normals, normalized.
std::vector<Complex> sphere_sample(int n, CounterRng& rng);

struct SampleSummary {
    Complex mean;
    double variance = 0.0; // E|z - mean|^2
    double abs2 = 0.0;     // E|z|^2
    double abs4 = 0.0;     // E|z|^4
};

struct MeasureSamples {
    std::vector<Complex> samples;
    std::uint64_t seed = 0;
    int n = 0;
    SampleSummary summary;
};

// N independent draws of <A X, X> with X uniform on the sphere. The sample
// sequence is fixed by (seed, stream layout) and independent of the thread
// count: stream s generates the block [s*4096, (s+1)*4096).
MeasureSamples mc_measure(const SquareMatrix& A, std::size_t N, std::uint64_t seed,
                          int threads = 0);

struct MomentReport {
    Complex mean;
    double variance = 0.0;
    std::vector<double> hermitian_moments; // k = 0.. for Hermitian input, else empty
};

// mean = Tr(A)/n, variance = (Tr(A*A)/n - |Tr(A)/n|^2)/(n+1).
MomentReport exact_moments(const SquareMatrix& A);

// k-th moment of the spectral measure of a Hermitian matrix: the complete
// homogeneous symmetric polynomial in the eigenvalues over binom(n+k-1, k),
// with h_k from the Newton recurrence k h_k = sum_i p_i h_{k-i}.
double hermitian_moment(const std::vector<double>& eigenvalues, int k);

struct CltRow {
    int n = 0;
    double a = 0.0; // Tr(A*A)/n
    double b = 0.0; // Re Tr(A^2)/n
    double e_re2 = 0.0, e_im2 = 0.0, e_abs4 = 0.0; // sqrt(n)-scaled empirical moments
    double t_re2 = 0.0, t_im2 = 0.0, t_abs4 = 0.0; // Gaussian targets
    bool degenerate = false;                        // |b| ~ a borderline
};

struct CltReport {
    std::vector<CltRow> rows;
};

// Jordan block of size n: ones on the superdiagonal.
SquareMatrix jordan_block(int n);

// Scaled-measure limit experiment over a family of traceless matrices.
// Throws PreconditionError on nonzero trace.
CltReport clt_experiment(const std::vector<SquareMatrix>& family, std::size_t n_samples,
                         std::uint64_t seed, int threads = 0);
CltReport clt_experiment_jordan(const std::vector<int>& n_list, std::size_t n_samples,
                                std::uint64_t seed, int threads = 0);

} // namespace numeasure
