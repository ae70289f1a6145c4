#include "numeasure/density.hpp"

#include "numeasure/errors.hpp"
#include "numeasure/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace numeasure {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

DiffOperator DiffOperator::monomial(int degree, int k) {
    DiffOperator op;
    op.degree = degree;
    op.coefficients.assign(degree + 1, 0.0);
    op.coefficients[k] = 1.0;
    return op;
}

BackprojectionEvaluator::BackprojectionEvaluator(const EigencurveTable& T, int threads)
    : table_(T) {
    if (T.collinear)
        throw QuasiHermitianInput("numerical range has empty interior: use hermitian_density "
                                  "of the rotated matrix instead");
    const int N = T.samples();
    cos_.resize(N);
    sin_.resize(N);
    degenerate_.assign(N, 0);
    per_angle_.reserve(N);
    std::vector<std::optional<HilbertEvaluator>> slots(N);
    if (threads <= 0) threads = default_thread_count();
    const double degen_tol = 1e-6 * std::max(T.spectral_diameter, 1e-300);
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t i) {
        std::vector<double> knots(T.dim);
        double min_gap = 1e300;
        for (int j = 0; j < T.dim; ++j) {
            knots[j] = T.lambda(static_cast<int>(i), j);
            if (j > 0) min_gap = std::min(min_gap, knots[j] - knots[j - 1]);
        }
        if (T.dim > 1 && min_gap < degen_tol) degenerate_[i] = 1;
        slots[i].emplace(KnotVector::regularized(std::move(knots)));
        cos_[i] = std::cos(T.theta(static_cast<int>(i)));
        sin_[i] = std::sin(T.theta(static_cast<int>(i)));
    });
    for (int i = 0; i < N; ++i) per_angle_.push_back(std::move(*slots[i]));
}

double BackprojectionEvaluator::density(Complex z) const { return density(z, nullptr); }

double BackprojectionEvaluator::angle_value(int i, Complex z, int* guarded) const {
    const double s = z.real() * cos_[i] + z.imag() * sin_[i];
    const HilbertEvaluator& he = per_angle_[i];
    if (he.in_guard_band(s)) {
        if (guarded) ++(*guarded);
        return he.guarded(s);
    }
    return he.closed_form(s);
}

double BackprojectionEvaluator::density(Complex z, int* guarded_angles) const {
    const DensityPointResult r = density_detail(z);
    if (guarded_angles) *guarded_angles = r.guarded_angles;
    return r.value;
}

DensityPointResult BackprojectionEvaluator::density_detail(Complex z) const {
    const int N = table_.samples();
    double even = 0.0, odd = 0.0;
    int guarded = 0;
    for (int i = 0; i < N; ++i) {
        if (degenerate_[i]) continue;
        (i % 2 ? odd : even) += angle_value(i, z, &guarded);
    }
    for (int i = 0; i < N; ++i) {
        if (!degenerate_[i]) continue;
        int lo = (i + N - 1) % N, hi = (i + 1) % N;
        while (degenerate_[lo]) lo = (lo + N - 1) % N;
        while (degenerate_[hi]) hi = (hi + 1) % N;
        (i % 2 ? odd : even) +=
            0.5 * (angle_value(lo, z, nullptr) + angle_value(hi, z, nullptr));
    }
    const double w = (kTwoPi / N) / (4.0 * kPi);
    DensityPointResult out;
    out.value = (even + odd) * w;
    out.half_grid_diff = std::abs(even - odd) * 2.0 * w;
    out.guarded_angles = guarded;
    return out;
}

double density_at(const SquareMatrix& A, const EigencurveTable& T, Complex z) {
    (void)A;
    return BackprojectionEvaluator(T).density(z);
}

double hermitian_density(const KnotVector& eigenvalues, double x) {
    return bspline_build(eigenvalues).evaluate(x);
}

GridSpec default_density_box(const EigencurveTable& T, int nx, int ny) {
    // Support lines give the tight bounding box; pad by 10% of the size.
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    const int N = T.samples();
    const int top = T.dim - 1;
    for (int i = 0; i < N; ++i) {
        // Boundary point of the support in direction theta.
        const double c = std::cos(T.theta(i)), s = std::sin(T.theta(i));
        const double lam = T.lambda(i, top), dl = T.dlambda(i, top);
        const double x = c * lam - s * dl, y = s * lam + c * dl;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    const double padx = 0.1 * std::max(xmax - xmin, 1e-6);
    const double pady = 0.1 * std::max(ymax - ymin, 1e-6);
    GridSpec g;
    g.x0 = xmin - padx;
    g.x1 = xmax + padx;
    g.y0 = ymin - pady;
    g.y1 = ymax + pady;
    g.nx = nx;
    g.ny = ny;
    return g;
}

DensityGrid density_grid(const SquareMatrix& A, const EigencurveTable& T, const GridSpec& grid,
                         int threads) {
    (void)A;
    grid.validate();
    if (threads <= 0) threads = default_thread_count();
    const BackprojectionEvaluator eval(T, threads);

    DensityGrid out;
    out.grid = grid;
    out.values.assign(grid.cells(), 0.0);
    std::atomic<int> nan_count{0};
    std::atomic<int> guarded_total{0};

    parallel_for(grid.cells(), threads, [&](std::size_t k) {
        const int i = static_cast<int>(k) / grid.ny;
        const int j = static_cast<int>(k) % grid.ny;
        const Complex z(grid.x(i), grid.y(j));
        if (!in_numerical_range(T, z)) {
            out.values[k] = 0.0; // known exactly outside the support
            return;
        }
        double v;
        try {
            const DensityPointResult r = eval.density_detail(z);
            guarded_total += r.guarded_angles;
            v = r.value;
            if (r.half_grid_diff > std::max(0.08, 0.15 * std::abs(v))) {
                // On the singular support the angular quadrature loses its
                // cancellation; no defined pointwise value to report.
                v = std::numeric_limits<double>::quiet_NaN();
            } else if (v < 0.0) {
                v = 0.0; // the density is strictly positive inside the range
            }
        } catch (const NumericalError&) {
            v = std::numeric_limits<double>::quiet_NaN();
        }
        if (std::isnan(v)) ++nan_count;
        out.values[k] = v;
    });
    out.nan_count = nan_count.load();
    out.guarded_evals = guarded_total.load();

    double mass = 0.0;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const double v = out.value(i, j);
            if (!std::isnan(v)) mass += v * grid.trapezoid_weight(i, j);
        }
    out.mass = mass * grid.hx() * grid.hy();
    return out;
}

namespace {

// Coefficients of P((w+1)/2, (w-1)/(2i)) in w for the operator's symbol.
std::vector<Complex> symbol_in_w(const DiffOperator& P) {
    std::vector<Complex> acc{0.0};
    const Complex half(0.5, 0.0);
    const Complex ihalf = Complex(0.0, -0.5); // 1/(2i)
    for (int k = 0; k <= P.degree; ++k) {
        if (P.coefficients[k] == 0.0) continue;
        // (w+1)/2 to the power degree-k times (w-1)/(2i) to the power k
        std::vector<Complex> term{P.coefficients[k]};
        auto mul = [&](Complex c0, Complex c1) {
            std::vector<Complex> next(term.size() + 1, 0.0);
            for (std::size_t m = 0; m < term.size(); ++m) {
                next[m] += term[m] * c0;
                next[m + 1] += term[m] * c1;
            }
            term = std::move(next);
        };
        for (int r = 0; r < P.degree - k; ++r) mul(half, half);
        for (int r = 0; r < k; ++r) mul(-ihalf, ihalf);
        if (term.size() > acc.size()) acc.resize(term.size(), 0.0);
        for (std::size_t m = 0; m < term.size(); ++m) acc[m] += term[m];
    }
    return acc;
}

Complex poly_eval(const std::vector<Complex>& c, Complex x) {
    Complex p = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) p = p * x + c[k];
    return p;
}

std::vector<Complex> poly_derivative(const std::vector<Complex>& c) {
    std::vector<Complex> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

ResidueDetail derivative_residue_detail(const SquareMatrix& A, Complex z, const DiffOperator& P,
                                        double tol_circle) {
    const int n = A.n;
    if (P.degree != n - 2)
        throw PreconditionError("derivative_residue: operator degree must be n-2");
    const DeltaPoly dp = delta_poly(A, z);
    const std::vector<Complex> dcoef = poly_derivative(dp.coeffs);
    const std::vector<Complex> sym = symbol_in_w(P);
    const std::vector<Complex> roots = poly_roots(dp.coeffs);

    double cmax = 0.0;
    for (const Complex& c : dp.coeffs) cmax = std::max(cmax, std::abs(c));

    ResidueDetail out;
    Complex acc = 0.0;
    for (const Complex& w : roots) {
        const double d = std::abs(std::abs(w) - 1.0);
        double weight;
        if (d <= tol_circle) {
            weight = 1.0;
            ++out.circle_roots;
        } else if (std::abs(w) < 1.0) {
            weight = 2.0;
            ++out.interior_roots;
        } else {
            continue;
        }
        const Complex deriv = poly_eval(dcoef, w);
        if (weight == 1.0 && std::abs(deriv) <= 1e3 * tol_circle * cmax)
            throw AmbiguousNearSingularSet("derivative_residue: near-multiple circle root, z "
                                           "too close to the singular set");
        if (std::abs(deriv) == 0.0)
            throw NumericalError("derivative_residue: vanishing derivative at a root");
        acc += weight * poly_eval(sym, w) / deriv;
    }
    const Complex value = -(factorial(n - 1) / (4.0 * kPi)) * acc;
    out.value = value.real();
    out.imag_residual = std::abs(value.imag());
    return out;
}

double derivative_residue(const SquareMatrix& A, Complex z, const DiffOperator& P,
                          double tol_circle) {
    return derivative_residue_detail(A, z, P, tol_circle).value;
}

double closed_form_density(ClosedFormCase which, const ClosedFormParams& params, Complex z) {
    const double x = z.real(), y = z.imag();
    const double r2 = x * x + y * y;
    switch (which) {
    case ClosedFormCase::jordan2: {
        if (r2 >= 1.0) return 0.0;
        return 1.0 / (kTwoPi * std::sqrt(1.0 - r2));
    }
    case ClosedFormCase::ellipse2x2: {
        const double b = params.b, c = params.c;
        if (!(b > 0.0) || c < 0.0)
            throw PreconditionError("closed_form_density(ellipse2x2): need b > 0, c >= 0");
        const double a2 = b * b + c * c;
        const double arg = a2 * b * b - b * b * x * x - a2 * y * y;
        if (arg <= 0.0) return 0.0;
        return 1.0 / (kTwoPi * std::sqrt(arg));
    }
    case ClosedFormCase::a3_radial: {
        if (r2 >= 1.0) return 0.0;
        const double r = std::sqrt(r2);
        if (r == 0.0) return std::numeric_limits<double>::infinity();
        return std::log((1.0 + std::sqrt(1.0 - r2)) / r) / kPi;
    }
    case ClosedFormCase::reducible3: {
        const double a = params.a;
        if (a < 0.0) throw PreconditionError("closed_form_density(reducible3): need a >= 0");
        if (std::abs(a - 1.0) <= 1e-12) {
            if (r2 >= 1.0) return 0.0;
            return std::sqrt(1.0 - r2) / (kPi * (1.0 - x));
        }
        if (a < 1.0) {
            if (r2 >= 1.0) return 0.0;
            const double u = 1.0 - a * x;
            const double den2 = u * u - (1.0 - r2) * (1.0 - a * a);
            if (den2 <= 0.0) return 0.0;
            const double arg = u / std::sqrt(den2);
            return std::acosh(std::max(1.0, arg)) / (kPi * std::sqrt(1.0 - a * a));
        }
        // a > 1: hull of the unit disk and the point a.
        const bool in_disk = r2 < 1.0;
        if (!in_disk) {
            // Support test: Re(z e^{-i t}) <= max(1, a cos t) on a fine sweep.
            for (int k = 0; k < 1440; ++k) {
                const double t = kTwoPi * k / 1440;
                const double s = x * std::cos(t) + y * std::sin(t);
                if (s > std::max(1.0, a * std::cos(t)) + 1e-12) return 0.0;
            }
            return 1.0 / std::sqrt(a * a - 1.0);
        }
        const double u = 1.0 - a * x;
        const double den2 = u * u + (1.0 - r2) * (a * a - 1.0);
        const double arg = std::clamp(u / std::sqrt(den2), -1.0, 1.0);
        return std::acos(arg) / (kPi * std::sqrt(a * a - 1.0));
    }
    }
    throw PreconditionError("closed_form_density: unknown case");
}

double radial_reconstruct(const std::function<double(double)>& F_H, double r_squared_max,
                          double s) {
    const double R2 = r_squared_max;
    const double h = 1e-4 * R2;
    if (s < h || s > R2 - h)
        throw PreconditionError("radial_reconstruct: s outside the differentiable window");
    // Inner integral G(q) = int_0^q F_H(q - t) / sqrt(t) dt = 2 int_0^sqrt(q) F_H(q - u^2) du.
    auto inner = [&](double q) {
        const double top = std::sqrt(q);
        const int panels = 256;
        const double du = top / (2 * panels);
        double sum = F_H(q) + F_H(q - top * top);
        for (int k = 1; k < 2 * panels; ++k) {
            const double u = k * du;
            sum += F_H(q - u * u) * (k % 2 ? 4.0 : 2.0);
        }
        return 2.0 * sum * du / 3.0;
    };
    return (inner(s + h) - inner(s - h)) / (2.0 * h * kPi);
}

std::vector<Complex> direct_sum_sample(const std::vector<Complex>& samples_a,
                                       const std::vector<Complex>& samples_b, int p, int q,
                                       CounterRng& rng, std::size_t count) {
    if (p < 1 || q < 1) throw PreconditionError("direct_sum_sample: p, q must be >= 1");
    if (samples_a.empty() || samples_b.empty())
        throw PreconditionError("direct_sum_sample: empty input sample set");
    std::vector<Complex> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Complex za = samples_a[rng.uniform_index(samples_a.size())];
        const Complex zb = samples_b[rng.uniform_index(samples_b.size())];
        const double t = rng.beta_integer(p, q);
        out.push_back(t * za + (1.0 - t) * zb);
    }
    return out;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-like initial guess on [-1, 1].
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 - x); // map to [0, 1]
        weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
}

namespace {

Complex empirical_cf(const std::vector<Complex>& samples, Complex xi) {
    Complex acc = 0.0;
    for (const Complex& z : samples) {
        const double phase = -(xi.real() * z.real() + xi.imag() * z.imag());
        acc += Complex(std::cos(phase), std::sin(phase));
    }
    return acc / static_cast<double>(samples.size());
}

} // namespace

double direct_sum_fourier_check(const std::vector<Complex>& samples_a,
                                const std::vector<Complex>& samples_b,
                                const std::vector<Complex>& samples_ab, int p, int q,
                                Complex xi) {
    std::vector<double> nodes, weights;
    gauss_legendre_01(64, nodes, weights);
    // Beta(p, q) normalization for integer arguments.
    const double beta_pq = factorial(p - 1) * factorial(q - 1) / factorial(p + q - 1);
    Complex integral = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double t = nodes[k];
        const Complex fa = empirical_cf(samples_a, t * xi);
        const Complex fb = empirical_cf(samples_b, (1.0 - t) * xi);
        integral += weights[k] * fa * fb * std::pow(t, p - 1) * std::pow(1.0 - t, q - 1);
    }
    const Complex lhs = empirical_cf(samples_ab, xi);
    return std::abs(lhs - integral / beta_pq);
}

} // namespace numeasure
