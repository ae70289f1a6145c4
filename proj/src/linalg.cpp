#include "numeasure/linalg.hpp"

#include "numeasure/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace numeasure {

SquareMatrix SquareMatrix::identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(const std::vector<Complex>& d) {
    SquareMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
    return m;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
    const int n = static_cast<int>(rows.size());
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw PreconditionError("from_rows: ragged row in square matrix");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

SquareMatrix SquareMatrix::from_real_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw PreconditionError("from_real_rows: ragged row in square matrix");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

SquareMatrix SquareMatrix::adjoint() const {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
}

SquareMatrix SquareMatrix::scaled(Complex c) const {
    SquareMatrix m(n);
    for (std::size_t k = 0; k < a.size(); ++k) m.a[k] = c * a[k];
    return m;
}

SquareMatrix SquareMatrix::plus(const SquareMatrix& other) const {
    SquareMatrix m(n);
    for (std::size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] + other.a[k];
    return m;
}

SquareMatrix SquareMatrix::times(const SquareMatrix& other) const {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Complex aik = at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) m.at(i, j) += aik * other.at(k, j);
        }
    return m;
}

std::vector<Complex> SquareMatrix::apply(std::span<const Complex> x) const {
    std::vector<Complex> y(n);
    for (int i = 0; i < n; ++i) {
        Complex acc = 0.0;
        const Complex* row = a.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

Complex SquareMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n; ++i) t += at(i, i);
    return t;
}

double SquareMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& v : a) s += std::norm(v);
    return std::sqrt(s);
}

bool SquareMatrix::is_hermitian(double tol) const {
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    return true;
}

Pencil make_pencil(const SquareMatrix& A) {
    const int n = A.n;
    Pencil p{SquareMatrix(n), SquareMatrix(n)};
    const Complex ihalf(0.0, 0.5); // 1/(2i) = -i/2
    for (int i = 0; i < n; ++i) {
        p.a1.at(i, i) = A.at(i, i).real();
        p.a2.at(i, i) = A.at(i, i).imag();
        for (int j = i + 1; j < n; ++j) {
            const Complex s = 0.5 * (A.at(i, j) + std::conj(A.at(j, i)));
            const Complex d = (A.at(i, j) - std::conj(A.at(j, i))) * (-ihalf);
            p.a1.at(i, j) = s;
            p.a1.at(j, i) = std::conj(s);
            p.a2.at(i, j) = d;
            p.a2.at(j, i) = std::conj(d);
        }
    }
    return p;
}

SquareMatrix h_theta(const Pencil& P, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const int n = P.n();
    SquareMatrix H(n);
    for (int i = 0; i < n; ++i) {
        H.at(i, i) = P.a1.at(i, i).real() * c + P.a2.at(i, i).real() * s;
        for (int j = i + 1; j < n; ++j) {
            const Complex v = P.a1.at(i, j) * c + P.a2.at(i, j) * s;
            H.at(i, j) = v;
            H.at(j, i) = std::conj(v);
        }
    }
    return H;
}

SquareMatrix h_theta_derivative(const Pencil& P, double theta) {
    return h_theta(P, theta + 1.5707963267948966); // cos'(t) = cos(t + pi/2)
}

EigenDecomposition hermitian_eigen(const SquareMatrix& Hin, double tol_eig) {
    const int n = Hin.n;
    const double scale = Hin.frobenius_norm();
    if (!Hin.is_hermitian(std::max(tol_eig, 1e-12) * std::max(scale, 1.0)))
        throw PreconditionError("hermitian_eigen: input is not Hermitian within tolerance");

    SquareMatrix H = Hin;
    SquareMatrix V = SquareMatrix::identity(n);
    if (n == 1) return {{H.at(0, 0).real()}, V};

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(H.at(i, j));
        return std::sqrt(s);
    };

    const double target = tol_eig * std::max(scale, 1e-300);
    const int max_sweeps = 60;
    int sweep = 0;
    while (off_norm() > target) {
        if (++sweep > max_sweeps) {
            std::ostringstream msg;
            msg << "hermitian_eigen: no convergence after " << max_sweeps
                << " sweeps, off-diagonal residual " << off_norm() << " (target " << target << ")";
            throw NumericalError(msg.str());
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex hpq = H.at(p, q);
                const double g = std::abs(hpq);
                if (g <= 1e-3 * target / n) continue;
                const double app = H.at(p, p).real();
                const double aqq = H.at(q, q).real();
                const Complex phase = hpq / g; // e^{i arg(hpq)}
                // Annihilation angle: with this rotation convention the new
                // (p,q) entry is e^{i arg} (g (c^2 - s^2) + (aqq - app) c s),
                // so t = s/c is the small root of t^2 - 2 zeta t - 1 = 0.
                const double zeta = (aqq - app) / (2.0 * g);
                const double t = (zeta >= 0.0 ? -1.0 : 1.0) /
                                 (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex sp = s * phase;        // applied on the q side
                const Complex spc = std::conj(sp);
                // Columns: col_p <- c*col_p + conj(sp)*col_q ; col_q <- -sp*col_p + c*col_q
                for (int i = 0; i < n; ++i) {
                    const Complex hip = H.at(i, p), hiq = H.at(i, q);
                    H.at(i, p) = c * hip + spc * hiq;
                    H.at(i, q) = -sp * hip + c * hiq;
                }
                for (int j = 0; j < n; ++j) {
                    const Complex hpj = H.at(p, j), hqj = H.at(q, j);
                    H.at(p, j) = c * hpj + sp * hqj;
                    H.at(q, j) = -spc * hpj + c * hqj;
                }
                for (int i = 0; i < n; ++i) {
                    const Complex vip = V.at(i, p), viq = V.at(i, q);
                    V.at(i, p) = c * vip + spc * viq;
                    V.at(i, q) = -sp * vip + c * viq;
                }
                H.at(p, q) = 0.0;
                H.at(q, p) = 0.0;
                H.at(p, p) = H.at(p, p).real();
                H.at(q, q) = H.at(q, q).real();
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return H.at(i, i).real() < H.at(j, j).real(); });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = SquareMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = H.at(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors.at(i, k) = V.at(i, order[k]);
    }
    return out;
}

Complex numerical_map(const SquareMatrix& A, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != A.n)
        throw PreconditionError("numerical_map: vector length does not match matrix dimension");
    double nrm = 0.0;
    for (const Complex& v : x) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    if (std::abs(nrm - 1.0) > 1e-12)
        throw PreconditionError("numerical_map: argument is not a unit vector");
    const std::vector<Complex> y = A.apply(x);
    Complex acc = 0.0;
    for (int i = 0; i < A.n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

MatrixStats matrix_stats(const SquareMatrix& A) {
    MatrixStats st{};
    st.trace = A.trace();
    double fro2 = 0.0;
    for (const Complex& v : A.a) fro2 += std::norm(v);
    st.frobenius_sq = fro2;
    Complex tr2 = 0.0;
    for (int i = 0; i < A.n; ++i)
        for (int k = 0; k < A.n; ++k) tr2 += A.at(i, k) * A.at(k, i);
    st.trace_a_squared = tr2;
    const SquareMatrix Ah = A.adjoint();
    const SquareMatrix comm = A.times(Ah).plus(Ah.times(A).scaled(-1.0));
    st.is_normal = comm.frobenius_norm() <= 1e-10 * std::max(fro2, 1e-300);
    return st;
}

SquareMatrix parse_matrix_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw PreconditionError(std::string("matrix JSON parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n"))
        throw PreconditionError("matrix JSON must be an object with field \"n\"");
    const int n = j.at("n").get<int>();
    if (n < 1) throw PreconditionError("matrix JSON: n must be >= 1");
    SquareMatrix m(n);
    if (j.contains("entries")) {
        const auto& rows = j.at("entries");
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            throw PreconditionError("matrix JSON: entries must hold n rows");
        for (int i = 0; i < n; ++i) {
            const auto& row = rows.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw PreconditionError("matrix JSON: each row must hold n entries");
            for (int k = 0; k < n; ++k) {
                const auto& e = row.at(k);
                if (!e.is_array() || e.size() != 2)
                    throw PreconditionError("matrix JSON: entries are [re, im] pairs");
                m.at(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        }
    } else if (j.contains("real_entries")) {
        const auto& rows = j.at("real_entries");
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            throw PreconditionError("matrix JSON: real_entries must hold n rows");
        for (int i = 0; i < n; ++i) {
            const auto& row = rows.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw PreconditionError("matrix JSON: each row must hold n entries");
            for (int k = 0; k < n; ++k) m.at(i, k) = row.at(k).get<double>();
        }
    } else {
        throw PreconditionError("matrix JSON needs \"entries\" or \"real_entries\"");
    }
    return m;
}

SquareMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open matrix file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix_json(buf.str());
}

std::string matrix_to_json(const SquareMatrix& A) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < A.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < A.n; ++k)
            row.push_back({A.at(i, k).real(), A.at(i, k).imag()});
        rows.push_back(row);
    }
    return nlohmann::json{{"n", A.n}, {"entries", rows}}.dump();
}

} // namespace numeasure
