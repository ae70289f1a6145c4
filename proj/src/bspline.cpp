#include "numeasure/bspline.hpp"

#include "numeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace numeasure {

namespace {

// Binomial coefficients up to the small degrees used here.
double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

KnotVector KnotVector::regularized(std::vector<double> values) {
    if (values.size() < 2) throw PreconditionError("KnotVector: need at least 2 knots");
    std::sort(values.begin(), values.end());
    const double range = values.back() - values.front();
    if (!(range > 0.0))
        throw PreconditionError("KnotVector: all knots coincide (range is zero)");
    const double sep = 1e-9 * range;
    const int n = static_cast<int>(values.size());
    // Spread each cluster of nearly coincident knots about its mean.
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && values[j + 1] - values[j] < sep) ++j;
        if (j > i) {
            double mean = 0.0;
            for (int k = i; k <= j; ++k) mean += values[k];
            mean /= (j - i + 1);
            for (int k = i; k <= j; ++k)
                values[k] = mean + (k - i - 0.5 * (j - i)) * sep;
        }
        i = j + 1;
    }
    // Spreading may push a cluster edge into its neighbor; restore order.
    for (int k = 1; k < n; ++k)
        if (values[k] - values[k - 1] < sep) values[k] = values[k - 1] + sep;
    KnotVector kv;
    kv.knots = std::move(values);
    return kv;
}

double PiecewisePoly::evaluate(double x) const {
    if (breakpoints.empty() || x < breakpoints.front() || x > breakpoints.back()) return 0.0;
    // Rightmost interval whose left end is <= x (right-continuous at breaks).
    int lo = static_cast<int>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                              breakpoints.begin()) -
             1;
    lo = std::min(lo, pieces() - 1);
    if (lo < 0) return 0.0;
    const double u = x - breakpoints[lo];
    const auto& c = coeffs[lo];
    double acc = 0.0;
    for (int m = static_cast<int>(c.size()) - 1; m >= 0; --m) acc = acc * u + c[m];
    return acc;
}

double PiecewisePoly::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < pieces(); ++i) {
        const double len = breakpoints[i + 1] - breakpoints[i];
        for (int k = 0; k <= 8; ++k)
            m = std::max(m, std::abs(evaluate(breakpoints[i] + len * k / 8.0 * 0.999999)));
    }
    return m;
}

double divided_difference(const KnotVector& kv, const std::vector<double>& g_values) {
    const int n = kv.size();
    if (static_cast<int>(g_values.size()) != n)
        throw PreconditionError("divided_difference: value count must match knot count");
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double denom = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double d = kv.knots[j] - kv.knots[k];
            if (d == 0.0) throw PreconditionError("divided_difference: duplicate knots");
            denom *= d;
        }
        acc += g_values[j] / denom;
    }
    return acc;
}

PiecewisePoly bspline_build(const KnotVector& kv) {
    const int n = kv.size();
    const int deg = n - 2;
    const auto& t = kv.knots;

    std::vector<double> weight(n, 1.0); // prod_{k != j} (t_j - t_k)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (k != j) weight[j] *= t[j] - t[k];

    PiecewisePoly out;
    out.breakpoints = t;
    out.coeffs.assign(n - 1, std::vector<double>(deg + 1, 0.0));

    // On (t_i, t_{i+1}) only knots above the interval contribute their
    // truncated power: B(x) = (n-1) * sum_{j > i} (t_j - x)^{n-2} / weight_j,
    // expanded in u = x - t_i.
    for (int i = 0; i < n - 1; ++i) {
        auto& c = out.coeffs[i];
        for (int j = i + 1; j < n; ++j) {
            const double base = t[j] - t[i]; // (t_j - x) = base - u
            const double f = (n - 1) / weight[j];
            if (deg == 0) {
                c[0] += f;
                continue;
            }
            double pw = 1.0;
            std::vector<double> basepow(deg + 1);
            for (int m = 0; m <= deg; ++m) {
                basepow[m] = pw;
                pw *= base;
            }
            for (int m = 0; m <= deg; ++m) {
                const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                c[m] += f * sign * binom(deg, m) * basepow[deg - m];
            }
        }
    }
    return out;
}

PiecewisePoly bspline_derivative(const PiecewisePoly& B) {
    PiecewisePoly out;
    out.breakpoints = B.breakpoints;
    const int np = B.pieces();
    out.coeffs.assign(np, {});
    for (int i = 0; i < np; ++i) {
        const auto& c = B.coeffs[i];
        std::vector<double> d;
        for (int m = 1; m < static_cast<int>(c.size()); ++m) d.push_back(m * c[m]);
        if (d.empty()) d.push_back(0.0);
        out.coeffs[i] = std::move(d);
    }
    // Jumps of B become Dirac atoms of B'.
    const double tol = 1e-9 * std::max(B.max_abs(), 1e-300);
    for (int k = 0; k <= np; ++k) {
        const double x = B.breakpoints[k];
        double left = 0.0, right = 0.0;
        if (k > 0) {
            const double u = x - B.breakpoints[k - 1];
            const auto& c = B.coeffs[k - 1];
            for (int m = static_cast<int>(c.size()) - 1; m >= 0; --m) left = left * u + c[m];
        }
        if (k < np) right = B.coeffs[k][0];
        const double jump = right - left;
        if (std::abs(jump) > tol) out.dirac_atoms.emplace_back(x, jump);
    }
    return out;
}

HilbertEvaluator::HilbertEvaluator(KnotVector knots)
    : knots_(std::move(knots)), deriv_(bspline_derivative(bspline_build(knots_))),
      guard_(knot_guard_width(knots_)) {}

bool HilbertEvaluator::in_guard_band(double s) const {
    for (double k : knots_.knots)
        if (std::abs(s - k) < guard_) return true;
    return false;
}

double HilbertEvaluator::closed_form_unchecked(double s) const {
    constexpr double pi = 3.14159265358979323846;
    double acc = 0.0;
    for (const auto& [loc, w] : deriv_.dirac_atoms) acc += w / (pi * (s - loc));

    for (int i = 0; i < deriv_.pieces(); ++i) {
        const double a = deriv_.breakpoints[i];
        const double b = deriv_.breakpoints[i + 1];
        const auto& c = deriv_.coeffs[i];
        const double sigma = s - a; // s in the local variable of the piece
        const double L = b - a;
        // p(sigma) and the synthetic-division quotient h with
        // p(u) - p(sigma) = (u - sigma) h(u).
        const int deg = static_cast<int>(c.size()) - 1;
        double ps = 0.0;
        for (int m = deg; m >= 0; --m) ps = ps * sigma + c[m];
        // h coefficients from synthetic division: h[deg-1] = c[deg],
        // h[m-1] = c[m] + sigma*h[m]; then integrate h over [0, L].
        double integral_h = 0.0;
        if (deg >= 1) {
            std::vector<double> h(deg);
            h[deg - 1] = c[deg];
            for (int m = deg - 1; m >= 1; --m) h[m - 1] = c[m] + sigma * h[m];
            double Lpow = L;
            for (int m = 0; m < deg; ++m) {
                integral_h += h[m] * Lpow / (m + 1);
                Lpow *= L;
            }
        }
        acc += (ps * (std::log(std::abs(sigma)) - std::log(std::abs(sigma - L))) - integral_h) / pi;
    }
    return acc;
}

double HilbertEvaluator::closed_form(double s) const {
    if (in_guard_band(s)) throw NearKnotEvaluation(s);
    return closed_form_unchecked(s);
}

// Principal-value quadrature of the piece part written as the odd integral
//   p.v. int B'(t)/(s-t) dt = int_0^inf [B'(s-u) - B'(s+u)]/u du,
// split at the radii where s +- u meets a knot; atoms stay in closed form.
double HilbertEvaluator::quadrature_fallback(double s) const {
    constexpr double pi = 3.14159265358979323846;
    double acc = 0.0;
    for (const auto& [loc, w] : deriv_.dirac_atoms) {
        const double d = s - loc;
        if (d != 0.0) acc += w / (pi * d);
    }
    const double lo = knots_.front(), hi = knots_.back();
    const double reach = std::max(std::abs(s - lo), std::abs(hi - s));
    std::vector<double> radii{1e-12 * knots_.range()};
    for (double k : knots_.knots) {
        const double r = std::abs(s - k);
        if (r > radii.front() && r < reach) radii.push_back(r);
    }
    radii.push_back(reach);
    std::sort(radii.begin(), radii.end());

    auto odd = [&](double u) { return (deriv_.evaluate(s - u) - deriv_.evaluate(s + u)) / u; };

    // The integrand behaves like jump/u near a knot radius, so integrate in
    // log space: int g(u) du = int g(e^v) e^v dv.
    for (std::size_t seg = 0; seg + 1 < radii.size(); ++seg) {
        const double a = radii[seg], b = radii[seg + 1];
        if (b - a <= 0.0 || a <= 0.0) continue;
        const double va = std::log(a), vb = std::log(b);
        const int panels = 128;
        const double h = (vb - va) / (2 * panels);
        auto g = [&](double v) {
            const double u = std::exp(v);
            return odd(u) * u;
        };
        double sum = g(va) + g(vb);
        for (int k = 1; k < 2 * panels; ++k) sum += g(va + k * h) * (k % 2 ? 4.0 : 2.0);
        acc += sum * h / 3.0 / pi;
    }
    return acc;
}

double HilbertEvaluator::guarded(double s) const {
    if (in_guard_band(s)) return quadrature_fallback(s);
    return closed_form_unchecked(s);
}

double hilbert_of_derivative(const KnotVector& knots, double s) {
    return HilbertEvaluator(knots).closed_form(s);
}

} // namespace numeasure
