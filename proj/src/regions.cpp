#include "numeasure/regions.hpp"

#include "numeasure/errors.hpp"
#include "numeasure/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace numeasure {

Complex delta_eval(const SquareMatrix& A, Complex z, Complex w) {
    const int n = A.n;
    const double x = z.real(), y = z.imag();
    const Complex shift = x * (w + 1.0) * 0.5 + y * (w - 1.0) / Complex(0.0, 2.0);
    SquareMatrix M(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            M.at(i, j) = 0.5 * A.at(i, j) + 0.5 * w * std::conj(A.at(j, i));
        M.at(i, i) -= shift;
    }
    // LU with partial pivoting, determinant from the diagonal.
    Complex det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(M.at(c, c));
        for (int r = c + 1; r < n; ++r)
            if (std::abs(M.at(r, c)) > best) {
                best = std::abs(M.at(r, c));
                piv = r;
            }
        if (best == 0.0) return 0.0;
        if (piv != c) {
            for (int j = c; j < n; ++j) std::swap(M.at(piv, j), M.at(c, j));
            det = -det;
        }
        det *= M.at(c, c);
        for (int r = c + 1; r < n; ++r) {
            const Complex f = M.at(r, c) / M.at(c, c);
            for (int j = c + 1; j < n; ++j) M.at(r, j) -= f * M.at(c, j);
        }
    }
    return det;
}

double delta_angle_form(const Pencil& P, Complex z, double theta) {
    SquareMatrix H = h_theta(P, theta);
    const double s = z.real() * std::cos(theta) + z.imag() * std::sin(theta);
    for (int i = 0; i < H.n; ++i) H.at(i, i) -= s;
    // Hermitian determinant through the same LU path (real up to roundoff).
    const int n = H.n;
    Complex det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(H.at(c, c));
        for (int r = c + 1; r < n; ++r)
            if (std::abs(H.at(r, c)) > best) {
                best = std::abs(H.at(r, c));
                piv = r;
            }
        if (best == 0.0) return 0.0;
        if (piv != c) {
            for (int j = c; j < n; ++j) std::swap(H.at(piv, j), H.at(c, j));
            det = -det;
        }
        det *= H.at(c, c);
        for (int r = c + 1; r < n; ++r) {
            const Complex f = H.at(r, c) / H.at(c, c);
            for (int j = c + 1; j < n; ++j) H.at(r, j) -= f * H.at(c, j);
        }
    }
    return det.real();
}

DeltaPoly delta_poly(const SquareMatrix& A, Complex z) {
    const int n = A.n;
    const int m = n + 1;
    // Nodes off the unit circle so no evaluation lands on a root of interest.
    std::vector<Complex> nodes(m), values(m);
    for (int k = 0; k < m; ++k) {
        nodes[k] = 1.1 * std::polar(1.0, 2.0 * 3.14159265358979323846 * k / m);
        values[k] = delta_eval(A, z, nodes[k]);
    }
    // Solve the Vandermonde system V c = values by Gaussian elimination.
    std::vector<std::vector<Complex>> V(m, std::vector<Complex>(m + 1));
    for (int r = 0; r < m; ++r) {
        Complex p = 1.0;
        for (int c = 0; c < m; ++c) {
            V[r][c] = p;
            p *= nodes[r];
        }
        V[r][m] = values[r];
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        double best = std::abs(V[c][c]);
        for (int r = c + 1; r < m; ++r)
            if (std::abs(V[r][c]) > best) {
                best = std::abs(V[r][c]);
                piv = r;
            }
        std::swap(V[c], V[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == c) continue;
            const Complex f = V[r][c] / V[c][c];
            for (int j = c; j <= m; ++j) V[r][j] -= f * V[c][j];
        }
    }
    DeltaPoly out;
    out.z = z;
    out.coeffs.resize(m);
    for (int c = 0; c < m; ++c) out.coeffs[c] = V[c][m] / V[c][c];
    double cmax = 0.0;
    for (const Complex& c : out.coeffs) cmax = std::max(cmax, std::abs(c));
    for (int c = m - 1; c > 0 && std::abs(out.coeffs[c]) <= 1e-12 * cmax; --c)
        ++out.leading_deficit;
    for (int c = 0; c + 1 < m && std::abs(out.coeffs[c]) <= 1e-14 * cmax; ++c)
        ++out.trailing_deficit;
    return out;
}

std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs_in, double tol_root) {
    std::vector<Complex> c = coeffs_in;
    double cmax = 0.0;
    for (const Complex& v : c) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0) throw PreconditionError("poly_roots: zero polynomial");

    int leading_deficit = 0;
    while (c.size() > 1 && std::abs(c.back()) <= 1e-12 * cmax) {
        c.pop_back();
        ++leading_deficit;
    }
    std::vector<Complex> roots;
    while (c.size() > 1 && std::abs(c.front()) <= 1e-14 * cmax) {
        c.erase(c.begin());
        roots.push_back(0.0); // exact zero roots split off
    }
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) return roots;

    // Initial guesses on a circle sized by the root-magnitude estimate.
    double r0 = std::pow(std::abs(c.front() / c.back()), 1.0 / deg);
    if (!(r0 > 1e-6) || !(r0 < 1e6)) r0 = 1.0;
    std::vector<Complex> w(deg);
    for (int i = 0; i < deg; ++i)
        w[i] = r0 * std::polar(1.0, 2.0 * 3.14159265358979323846 * (i + 0.25) / deg + 0.3);

    auto eval = [&](Complex x, Complex* dp) {
        Complex p = c[deg], d = 0.0;
        for (int k = deg - 1; k >= 0; --k) {
            d = d * x + p;
            p = p * x + c[k];
        }
        if (dp) *dp = d;
        return p;
    };

    bool converged = false;
    for (int it = 0; it < 200 && !converged; ++it) {
        double move = 0.0;
        for (int i = 0; i < deg; ++i) {
            Complex d;
            const Complex p = eval(w[i], &d);
            if (std::abs(p) == 0.0) continue;
            const Complex newton = (d == Complex(0.0)) ? Complex(1e-12) : p / d;
            Complex repul = 0.0;
            for (int j = 0; j < deg; ++j) {
                if (j == i) continue;
                Complex diff = w[i] - w[j];
                if (std::abs(diff) < 1e-14) diff = 1e-14;
                repul += 1.0 / diff;
            }
            const Complex denom = 1.0 - newton * repul;
            const Complex delta = (std::abs(denom) < 1e-14) ? newton : newton / denom;
            w[i] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-15 * std::max(1.0, r0)) converged = true;
        if (it > 4) {
            converged = true;
            for (int i = 0; i < deg; ++i) {
                double sc = 1.0, xp = std::abs(w[i]);
                for (int k = 0; k <= deg; ++k) sc = std::max(sc, std::pow(xp, k));
                if (std::abs(eval(w[i], nullptr)) > tol_root * cmax * sc) {
                    converged = false;
                    break;
                }
            }
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "poly_roots: no convergence after 200 iterations; residuals:";
        for (int i = 0; i < deg; ++i) msg << ' ' << std::abs(eval(w[i], nullptr));
        throw NumericalError(msg.str());
    }
    roots.insert(roots.end(), w.begin(), w.end());
    (void)leading_deficit; // roots at infinity carry no finite representative
    return roots;
}

int tangent_count(const SquareMatrix& A, Complex z, double tol_circle) {
    const DeltaPoly dp = delta_poly(A, z);
    // Near-double roots are resolved radially only to sqrt(tol_root), so the
    // residual target must sit well below the guard annulus squared.
    const std::vector<Complex> roots = poly_roots(dp.coeffs, 1e-13);
    int on_circle = 0;
    for (const Complex& w : roots) {
        const double d = std::abs(std::abs(w) - 1.0);
        if (d <= tol_circle)
            ++on_circle;
        else if (d < 3.0 * tol_circle)
            throw AmbiguousNearSingularSet("tangent_count: ambiguous, z too close to the "
                                           "singular set");
    }
    return on_circle;
}

bool in_numerical_range(const EigencurveTable& T, Complex z) {
    const int N = T.samples();
    const int top = T.dim - 1;
    const double slack = 1e-9 * std::max(1.0, T.spectral_diameter);
    for (int i = 0; i < N; ++i) {
        const double s = z.real() * std::cos(T.theta(i)) + z.imag() * std::sin(T.theta(i));
        if (s > T.lambda(i, top) + slack) return false;
    }
    return true;
}

int RegionMap::ambiguous_count() const {
    int c = 0;
    for (int v : n_tangents)
        if (v < 0) ++c;
    return c;
}

RegionMap classify_grid(const SquareMatrix& A, const EigencurveTable& T, const GridSpec& grid,
                        double tol_circle, int threads) {
    grid.validate();
    if (threads <= 0) threads = default_thread_count();
    RegionMap map;
    map.grid = grid;
    map.dim = A.n;
    map.n_tangents.assign(grid.cells(), -1);
    map.inside.assign(grid.cells(), 0);
    map.pi_mask.assign(grid.cells(), 0);

    parallel_for(grid.cells(), threads, [&](std::size_t k) {
        const int i = static_cast<int>(k) / grid.ny;
        const int j = static_cast<int>(k) % grid.ny;
        const Complex z(grid.x(i), grid.y(j));
        map.inside[k] = in_numerical_range(T, z) ? 1 : 0;
        int nz = -1;
        try {
            nz = tangent_count(A, z, tol_circle);
        } catch (const AmbiguousNearSingularSet&) {
            nz = -1;
        }
        map.n_tangents[k] = nz;
        map.pi_mask[k] = (nz == A.n) ? 1 : 0;
    });
    return map;
}

RegionComponents region_components(const RegionMap& map) {
    const int nx = map.grid.nx, ny = map.grid.ny;
    RegionComponents rc;
    rc.label.assign(map.grid.cells(), -1);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const std::size_t k = map.grid.index(i, j);
            if (map.n_tangents[k] < 0 || rc.label[k] >= 0) continue;
            const int comp = rc.count++;
            const int nval = map.n_tangents[k];
            rc.component_n.push_back(nval);
            rc.sizes.push_back(0);
            std::deque<std::pair<int, int>> queue{{i, j}};
            rc.label[k] = comp;
            while (!queue.empty()) {
                auto [ci, cj] = queue.front();
                queue.pop_front();
                ++rc.sizes[comp];
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int ni = ci + di[d], nj = cj + dj[d];
                    if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
                    const std::size_t nk = map.grid.index(ni, nj);
                    if (rc.label[nk] >= 0 || map.n_tangents[nk] != nval) continue;
                    rc.label[nk] = comp;
                    queue.emplace_back(ni, nj);
                }
            }
        }
    }
    return rc;
}

} // namespace numeasure
