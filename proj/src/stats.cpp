#include "numeasure/stats.hpp"

#include "numeasure/errors.hpp"
#include "numeasure/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace numeasure {

std::vector<Complex> sphere_sample(int n, CounterRng& rng) {
    if (n < 1) throw PreconditionError("sphere_sample: n must be >= 1");
    std::vector<Complex> x(n);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        x[i] = Complex(re, im);
        norm2 += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : x) v *= inv;
    return x;
}

namespace {
constexpr std::size_t kStreamBlock = 4096;
} // namespace

MeasureSamples mc_measure(const SquareMatrix& A, std::size_t N, std::uint64_t seed, int threads) {
    if (N < 1) throw PreconditionError("mc_measure: N must be >= 1");
    if (threads <= 0) threads = default_thread_count();
    MeasureSamples out;
    out.samples.resize(N);
    out.seed = seed;
    out.n = A.n;

    const std::size_t blocks = (N + kStreamBlock - 1) / kStreamBlock;
    parallel_for(blocks, threads, [&](std::size_t blk) {
        CounterRng rng(seed, blk);
        const std::size_t begin = blk * kStreamBlock;
        const std::size_t end = std::min(N, begin + kStreamBlock);
        std::vector<Complex> x(A.n), y(A.n);
        for (std::size_t s = begin; s < end; ++s) {
            double norm2 = 0.0;
            for (int i = 0; i < A.n; ++i) {
                const double re = rng.normal();
                const double im = rng.normal();
                x[i] = Complex(re, im);
                norm2 += re * re + im * im;
            }
            // <A x, x> / ||x||^2: normalization folded into the quotient.
            Complex acc = 0.0;
            for (int i = 0; i < A.n; ++i) {
                Complex row = 0.0;
                const Complex* ai = A.a.data() + static_cast<std::size_t>(i) * A.n;
                for (int j = 0; j < A.n; ++j) row += ai[j] * x[j];
                acc += std::conj(x[i]) * row;
            }
            out.samples[s] = acc / norm2;
        }
    });

    Complex mean = 0.0;
    for (const Complex& z : out.samples) mean += z;
    mean /= static_cast<double>(N);
    double var = 0.0, m2 = 0.0, m4 = 0.0;
    for (const Complex& z : out.samples) {
        var += std::norm(z - mean);
        const double a2 = std::norm(z);
        m2 += a2;
        m4 += a2 * a2;
    }
    out.summary.mean = mean;
    out.summary.variance = var / static_cast<double>(N);
    out.summary.abs2 = m2 / static_cast<double>(N);
    out.summary.abs4 = m4 / static_cast<double>(N);
    return out;
}

MomentReport exact_moments(const SquareMatrix& A) {
    const MatrixStats st = matrix_stats(A);
    MomentReport rep;
    rep.mean = st.trace / static_cast<double>(A.n);
    rep.variance =
        (st.frobenius_sq / A.n - std::norm(rep.mean)) / static_cast<double>(A.n + 1);
    if (A.is_hermitian(1e-12 * std::max(1.0, std::sqrt(st.frobenius_sq)))) {
        const EigenDecomposition eig = hermitian_eigen(A);
        for (int k = 0; k <= 4; ++k) rep.hermitian_moments.push_back(hermitian_moment(eig.values, k));
    }
    return rep;
}

double hermitian_moment(const std::vector<double>& eigenvalues, int k) {
    if (k < 0) throw PreconditionError("hermitian_moment: k must be >= 0");
    const int n = static_cast<int>(eigenvalues.size());
    // Power sums p_i, then h by Newton's recurrence.
    std::vector<double> p(k + 1, 0.0), h(k + 1, 0.0);
    for (int i = 1; i <= k; ++i)
        for (double lam : eigenvalues) p[i] += std::pow(lam, i);
    h[0] = 1.0;
    for (int m = 1; m <= k; ++m) {
        double acc = 0.0;
        for (int i = 1; i <= m; ++i) acc += p[i] * h[m - i];
        h[m] = acc / m;
    }
    // binom(n+k-1, k)
    double binom = 1.0;
    for (int i = 1; i <= k; ++i) binom = binom * (n + i - 1) / i;
    return h[k] / binom;
}

SquareMatrix jordan_block(int n) {
    SquareMatrix A(n);
    for (int i = 0; i + 1 < n; ++i) A.at(i, i + 1) = 1.0;
    return A;
}

CltReport clt_experiment(const std::vector<SquareMatrix>& family, std::size_t n_samples,
                         std::uint64_t seed, int threads) {
    CltReport rep;
    for (const SquareMatrix& A : family) {
        const MatrixStats st = matrix_stats(A);
        const double scale = std::sqrt(st.frobenius_sq);
        if (std::abs(st.trace) > 1e-10 * std::max(1.0, scale))
            throw PreconditionError("clt_experiment: family member has nonzero trace");
        CltRow row;
        row.n = A.n;
        row.a = st.frobenius_sq / A.n;
        row.b = st.trace_a_squared.real() / A.n;
        row.degenerate = std::abs(std::abs(row.b) - row.a) <= 1e-9 * std::max(1.0, row.a);
        row.t_re2 = 0.5 * (row.a + row.b);
        row.t_im2 = 0.5 * (row.a - row.b);
        row.t_abs4 = 2.0 * row.a * row.a + row.b * row.b;

        const MeasureSamples ms = mc_measure(A, n_samples, seed, threads);
        const double s = std::sqrt(static_cast<double>(A.n)); // sqrt(n) scaling
        double re2 = 0.0, im2 = 0.0, a4 = 0.0;
        for (const Complex& z : ms.samples) {
            const Complex w = s * z;
            re2 += w.real() * w.real();
            im2 += w.imag() * w.imag();
            a4 += std::norm(w) * std::norm(w);
        }
        row.e_re2 = re2 / n_samples;
        row.e_im2 = im2 / n_samples;
        row.e_abs4 = a4 / n_samples;
        rep.rows.push_back(row);
    }
    return rep;
}

CltReport clt_experiment_jordan(const std::vector<int>& n_list, std::size_t n_samples,
                                std::uint64_t seed, int threads) {
    std::vector<SquareMatrix> family;
    family.reserve(n_list.size());
    for (int n : n_list) family.push_back(jordan_block(n));
    return clt_experiment(family, n_samples, seed, threads);
}

} // namespace numeasure
