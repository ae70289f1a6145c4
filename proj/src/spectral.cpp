#include "numeasure/spectral.hpp"

#include "numeasure/errors.hpp"
#include "numeasure/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace numeasure {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

CurveSample eval_curves(const Pencil& P, double theta, double group_tol) {
    const SquareMatrix H = h_theta(P, theta);
    const SquareMatrix Hp = h_theta_derivative(P, theta);
    const EigenDecomposition eig = hermitian_eigen(H);
    const int n = P.n();
    if (group_tol <= 0.0) group_tol = 1e-9 * std::max(1.0, H.frobenius_norm());

    CurveSample out;
    out.lambda = eig.values;
    out.dlambda.assign(n, 0.0);

    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && eig.values[j + 1] - eig.values[j] <= group_tol) ++j;
        const int k = j - i + 1;
        if (k == 1) {
            // <H'(theta) x, x> for the (simple) eigenvector.
            Complex acc = 0.0;
            for (int r = 0; r < n; ++r) {
                Complex hx = 0.0;
                for (int c = 0; c < n; ++c) hx += Hp.at(r, c) * eig.vectors.at(c, i);
                acc += std::conj(eig.vectors.at(r, i)) * hx;
            }
            out.dlambda[i] = acc.real();
        } else {
            // Degenerate group: diagonalize H' restricted to the eigenspace.
            SquareMatrix M(k);
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    Complex acc = 0.0;
                    for (int r = 0; r < n; ++r) {
                        Complex hx = 0.0;
                        for (int c = 0; c < n; ++c) hx += Hp.at(r, c) * eig.vectors.at(c, i + b);
                        acc += std::conj(eig.vectors.at(r, i + a)) * hx;
                    }
                    M.at(a, b) = acc;
                }
            // Symmetrize away roundoff before decomposing.
            for (int a = 0; a < k; ++a) {
                M.at(a, a) = M.at(a, a).real();
                for (int b = a + 1; b < k; ++b) {
                    const Complex v = 0.5 * (M.at(a, b) + std::conj(M.at(b, a)));
                    M.at(a, b) = v;
                    M.at(b, a) = std::conj(v);
                }
            }
            const EigenDecomposition sub = hermitian_eigen(M);
            for (int a = 0; a < k; ++a) out.dlambda[i + a] = sub.values[a];
        }
        i = j + 1;
    }
    return out;
}

EigencurveTable sample_curves(const Pencil& P, int n_theta) {
    if (n_theta < 64 || n_theta % 2 != 0)
        throw PreconditionError("sample_curves: n_theta must be even and >= 64");
    const int n = P.n();
    EigencurveTable T;
    T.pencil = P;
    T.dim = n;
    T.thetas.resize(n_theta);
    T.lambdas.resize(static_cast<std::size_t>(n_theta) * n);
    T.dlambdas.resize(static_cast<std::size_t>(n_theta) * n);
    for (int i = 0; i < n_theta; ++i) T.thetas[i] = kTwoPi * i / n_theta;

    parallel_for(static_cast<std::size_t>(n_theta), default_thread_count(), [&](std::size_t i) {
        const CurveSample cs = eval_curves(P, T.thetas[i]);
        std::copy(cs.lambda.begin(), cs.lambda.end(), T.lambdas.begin() + i * n);
        std::copy(cs.dlambda.begin(), cs.dlambda.end(), T.dlambdas.begin() + i * n);
    });

    double lo = T.lambdas[0], hi = T.lambdas[0];
    for (double v : T.lambdas) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    T.spectral_diameter = hi - lo;

    // Collinearity of the critical-point cloud (quasi-Hermitian detection):
    // smallest principal axis of the centered cloud below 1e-9 * scale.
    double sx = 0.0, sy = 0.0;
    const std::size_t count = T.lambdas.size();
    std::vector<double> xs(count), ys(count);
    for (int i = 0; i < n_theta; ++i) {
        const double c = std::cos(T.thetas[i]), s = std::sin(T.thetas[i]);
        for (int j = 0; j < n; ++j) {
            const double lam = T.lambda(i, j), dl = T.dlambda(i, j);
            const double x = c * lam - s * dl;
            const double y = s * lam + c * dl;
            xs[i * static_cast<std::size_t>(n) + j] = x;
            ys[i * static_cast<std::size_t>(n) + j] = y;
            sx += x;
            sy += y;
        }
    }
    sx /= count;
    sy /= count;
    double cxx = 0.0, cxy = 0.0, cyy = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double dx = xs[k] - sx, dy = ys[k] - sy;
        cxx += dx * dx;
        cxy += dx * dy;
        cyy += dy * dy;
    }
    cxx /= count;
    cxy /= count;
    cyy /= count;
    const double tr = cxx + cyy, det = cxx * cyy - cxy * cxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double minor = std::sqrt(std::max(0.0, tr / 2.0 - disc));
    const double scale = std::max(T.spectral_diameter, std::sqrt(sx * sx + sy * sy));
    T.collinear = minor <= 1e-9 * std::max(scale, 1e-12);
    return T;
}

std::vector<CriticalPoint> critical_points(const EigencurveTable& T) {
    std::vector<CriticalPoint> pts;
    pts.reserve(static_cast<std::size_t>(T.samples()) * T.dim);
    for (int i = 0; i < T.samples(); ++i) {
        const Complex rot = std::polar(1.0, T.theta(i));
        for (int j = 0; j < T.dim; ++j)
            pts.push_back({j, T.theta(i), rot * Complex(T.lambda(i, j), T.dlambda(i, j))});
    }
    return pts;
}

namespace {

double slot_gap(const Pencil& P, double theta, int j) {
    const CurveSample cs = eval_curves(P, theta);
    return cs.lambda[j + 1] - cs.lambda[j];
}

// Golden-section minimum of the adjacent slot gap on [a, b].
double refine_crossing(const Pencil& P, int j, double a, double b, double* gap_out) {
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = slot_gap(P, x1, j);
    double f2 = slot_gap(P, x2, j);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = slot_gap(P, x1, j);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = slot_gap(P, x2, j);
        }
    }
    const double mid = 0.5 * (a + b);
    if (gap_out) *gap_out = slot_gap(P, mid, j);
    return mid;
}

} // namespace

CrossingReport detect_crossings(const EigencurveTable& T, double tol_cross) {
    const double diam = std::max(T.spectral_diameter, 1e-300);
    if (tol_cross <= 0.0) tol_cross = 1e-7 * diam;
    const double plateau_tol = std::max(tol_cross, 1e-8 * diam);
    const int N = T.samples();
    const int n = T.dim;

    CrossingReport report;
    for (int j = 0; j + 1 < n; ++j) {
        // Skip identically coincident slots (multiplicity, not crossings).
        int tiny = 0;
        for (int i = 0; i < N; ++i)
            if (T.lambda(i, j + 1) - T.lambda(i, j) < plateau_tol) ++tiny;
        if (tiny > N / 3) continue;

        for (int i = 0; i < N; ++i) {
            const int im = (i + N - 1) % N, ip = (i + 1) % N;
            const double g = T.lambda(i, j + 1) - T.lambda(i, j);
            const double gm = T.lambda(im, j + 1) - T.lambda(im, j);
            const double gp = T.lambda(ip, j + 1) - T.lambda(ip, j);
            if (!(g <= gm && g < gp)) continue;
            if (g > 0.05 * diam) continue;
            // Require the gap to reopen nearby: crossings are isolated.
            const int w = 4;
            const double far_lo = T.lambda((i + N - w) % N, j + 1) - T.lambda((i + N - w) % N, j);
            const double far_hi = T.lambda((i + w) % N, j + 1) - T.lambda((i + w) % N, j);
            if (far_lo <= plateau_tol || far_hi <= plateau_tol) continue;

            double gap_min = 0.0;
            const double a = T.theta(im) + (i == 0 ? -kTwoPi : 0.0);
            const double b = a + 2.0 * kTwoPi / N;
            double th = refine_crossing(T.pencil, j, a, b, &gap_min);
            if (gap_min > tol_cross) continue;
            if (th < 0.0) th += kTwoPi;
            if (th >= kTwoPi) th -= kTwoPi;

            const CurveSample cs = eval_curves(T.pencil, th, std::max(2.0 * gap_min, 0.0) +
                                                                 1e-9 * std::max(1.0, diam));
            CrossingEvent ev;
            ev.theta = th;
            ev.j = j;
            ev.p = j + 1;
            ev.value = 0.5 * (cs.lambda[j] + cs.lambda[j + 1]);
            ev.dlambda_low = cs.dlambda[j];
            ev.dlambda_high = cs.dlambda[j + 1];
            // The same crossing can be refined from two adjacent samples.
            bool dup = false;
            for (const auto& e : report.events)
                if (e.j == j && std::abs(e.theta - ev.theta) < 4.0 * kTwoPi / N &&
                    std::abs(e.value - ev.value) < 1e-5 * diam)
                    dup = true;
            if (!dup) report.events.push_back(ev);
        }
    }

    std::sort(report.events.begin(), report.events.end(),
              [](const CrossingEvent& a, const CrossingEvent& b) { return a.theta < b.theta; });

    const double match_tol = 1e-6 * (1.0 + diam);
    for (const auto& ev : report.events) {
        const Complex rot = std::polar(1.0, ev.theta);
        const Complex z1 = rot * Complex(ev.value, ev.dlambda_low);
        const Complex z2 = rot * Complex(ev.value, ev.dlambda_high);
        bool dup = false;
        for (const auto& seg : report.segments) {
            const bool same = std::abs(seg.a - z1) < match_tol && std::abs(seg.b - z2) < match_tol;
            const bool flipped =
                std::abs(seg.a - z2) < match_tol && std::abs(seg.b - z1) < match_tol;
            if (same || flipped) dup = true;
        }
        if (!dup) report.segments.push_back({z1, z2, ev.theta});
    }
    return report;
}

namespace {

struct Clustering {
    std::vector<double> values; // cluster means, ascending
    std::vector<int> sizes;
    std::vector<int> slot_cluster; // slot index -> cluster index
};

Clustering cluster_row(const EigencurveTable& T, int i, double tol) {
    Clustering c;
    c.slot_cluster.resize(T.dim);
    int j = 0;
    while (j < T.dim) {
        int k = j;
        double sum = T.lambda(i, j);
        while (k + 1 < T.dim && T.lambda(i, k + 1) - T.lambda(i, k) <= tol) {
            ++k;
            sum += T.lambda(i, k);
        }
        for (int s = j; s <= k; ++s) c.slot_cluster[s] = static_cast<int>(c.values.size());
        c.values.push_back(sum / (k - j + 1));
        c.sizes.push_back(k - j + 1);
        j = k + 1;
    }
    return c;
}

} // namespace

CycleStructure cycle_structure(const EigencurveTable& T, double tol_match) {
    const double diam = std::max(T.spectral_diameter, 1e-300);
    if (tol_match <= 0.0) tol_match = 1e-7 * diam;
    const int N = T.samples();

    // Reference sample: among samples showing the full set of distinct
    // curves (crossing samples show fewer clusters), maximize the smallest
    // inter-cluster gap.
    std::size_t m_max = 0;
    for (int i = 0; i < N; ++i)
        m_max = std::max(m_max, cluster_row(T, i, tol_match).values.size());
    int best = -1;
    double best_quality = -1.0;
    for (int i = 0; i < N; ++i) {
        const Clustering c = cluster_row(T, i, tol_match);
        if (c.values.size() != m_max) continue;
        double q = diam * 1e9;
        for (std::size_t k = 0; k + 1 < c.values.size(); ++k)
            q = std::min(q, c.values[k + 1] - c.values[k]);
        if (q > best_quality) {
            best_quality = q;
            best = i;
        }
    }
    if (best < 0 || best_quality <= 10.0 * tol_match)
        throw NumericalError("cycle structure undetermined: no crossing-free sample separates "
                             "the eigenvalue curves");

    const Clustering ref = cluster_row(T, best, tol_match);
    const int m = static_cast<int>(ref.values.size());
    const double theta0 = T.theta(best);

    const CrossingReport crossings = detect_crossings(T);

    // Sweep curve order through crossing events. order[k] = curve id at
    // ascending-value position k; rho maps start position to end position
    // after half a period.
    auto window_pos = [&](double theta) {
        double w = theta - theta0;
        while (w <= 1e-12) w += kTwoPi;
        return w;
    };
    std::vector<std::pair<double, double>> sorted_events; // (window pos, value)
    for (const auto& ev : crossings.events)
        sorted_events.emplace_back(window_pos(ev.theta), ev.value);
    std::sort(sorted_events.begin(), sorted_events.end());

    const double step = kTwoPi / N;
    auto apply_event = [&](std::vector<int>& ord, double wpos, double value) {
        // Cluster the sample strictly before the event (events can sit
        // exactly on a grid angle where the clusters are merged).
        int steps = static_cast<int>(std::floor((wpos - 1e-9 * step) / step));
        const int i_pre = (best + std::max(0, std::min(steps, N - 1))) % N;
        const Clustering c = cluster_row(T, i_pre, tol_match);
        if (static_cast<int>(c.values.size()) != m) return; // merged sample, skip
        // Adjacent position pair whose values surround the event value.
        int k_best = -1;
        double d_best = 1e300;
        for (int k = 0; k + 1 < m; ++k) {
            const double d =
                std::max(std::abs(c.values[k] - value), std::abs(c.values[k + 1] - value));
            if (d < d_best) {
                d_best = d;
                k_best = k;
            }
        }
        if (k_best >= 0) std::swap(ord[k_best], ord[k_best + 1]);
    };

    std::vector<int> rho(m, -1);
    {
        std::vector<int> half_order(m);
        std::iota(half_order.begin(), half_order.end(), 0);
        for (const auto& [wpos, value] : sorted_events) {
            if (wpos >= kPi) break;
            apply_event(half_order, wpos, value);
        }
        for (int pos = 0; pos < m; ++pos) rho[half_order[pos]] = pos;
    }

    CycleStructure cs;
    cs.distinct = m;
    cs.tau.assign(m, 0);
    // Position j at theta0 maps to position (m-1) - rho(curve at j) under the
    // antipodal reversal; curves are indexed by their start position.
    for (int j = 0; j < m; ++j) cs.tau[j] = (m - 1) - rho[j];

    std::vector<char> seen(m, 0);
    for (int j = 0; j < m; ++j) {
        if (seen[j]) continue;
        std::vector<int> cyc;
        int c = j;
        while (!seen[c]) {
            seen[c] = 1;
            cyc.push_back(c);
            c = cs.tau[c];
        }
        cs.cycles.push_back(cyc);
        cs.lengths.push_back(static_cast<int>(cyc.size()));
        int mult = ref.sizes[cyc.front()];
        for (int idx : cyc) mult = std::min(mult, ref.sizes[idx]);
        cs.multiplicities.push_back(mult);
    }

    int total = 0;
    for (std::size_t c = 0; c < cs.cycles.size(); ++c)
        total += cs.lengths[c] * cs.multiplicities[c];
    if (total != T.dim)
        throw NumericalError("cycle structure undetermined: length/multiplicity checksum failed");

    // Point components: sweep slot ownership over the full period and measure
    // each curve's critical-point cloud.
    std::vector<int> full_order(m);
    std::iota(full_order.begin(), full_order.end(), 0);
    std::vector<double> lo_x(m, 1e300), hi_x(m, -1e300), lo_y(m, 1e300), hi_y(m, -1e300);
    std::size_t ev_idx = 0;
    for (int s = 0; s < N; ++s) {
        const double wsample = s * step;
        while (ev_idx < sorted_events.size() && sorted_events[ev_idx].first < wsample - 0.25 * step) {
            apply_event(full_order, sorted_events[ev_idx].first, sorted_events[ev_idx].second);
            ++ev_idx;
        }
        // Samples straddling a crossing carry ambiguous slot labels; skip them.
        bool near_event = false;
        for (const auto& [wpos, value] : sorted_events)
            if (std::abs(wpos - wsample) <= 0.5 * step) near_event = true;
        if (near_event) continue;
        const int i = (best + s) % N;
        const Complex rot = std::polar(1.0, T.theta(i));
        int slot = 0;
        for (int pos = 0; pos < m; ++pos) {
            const int curve = full_order[pos];
            for (int r = 0; r < ref.sizes[curve]; ++r, ++slot) {
                const Complex z = rot * Complex(T.lambda(i, slot), T.dlambda(i, slot));
                lo_x[curve] = std::min(lo_x[curve], z.real());
                hi_x[curve] = std::max(hi_x[curve], z.real());
                lo_y[curve] = std::min(lo_y[curve], z.imag());
                hi_y[curve] = std::max(hi_y[curve], z.imag());
            }
        }
    }
    cs.point_component.resize(cs.cycles.size());
    for (std::size_t c = 0; c < cs.cycles.size(); ++c) {
        double d = 0.0;
        for (int curve : cs.cycles[c])
            d = std::max({d, hi_x[curve] - lo_x[curve], hi_y[curve] - lo_y[curve]});
        cs.point_component[c] = d < 1e-8 * std::max(1.0, diam);
    }
    return cs;
}

double support_function(const EigencurveTable& T, double theta) {
    const int N = T.samples();
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    const double step = kTwoPi / N;
    const int i0 = static_cast<int>(t / step) % N;
    const int i1 = (i0 + 1) % N;
    const double frac = (t - i0 * step) / step;
    const int top = T.dim - 1;
    return (1.0 - frac) * T.lambda(i0, top) + frac * T.lambda(i1, top);
}

} // namespace numeasure
