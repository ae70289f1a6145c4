#include "numeasure/fixtures.hpp"

#include "numeasure/density.hpp"
#include "numeasure/errors.hpp"

#include <cmath>
#include <sstream>

namespace numeasure {

namespace {

constexpr double kPi = 3.14159265358979323846;

FixtureTruth scalar_truth(double v, std::string desc) {
    FixtureTruth t;
    t.scalar = v;
    t.has_scalar = true;
    t.description = std::move(desc);
    return t;
}

FixtureTruth density_truth(std::function<double(Complex)> f, std::string desc) {
    FixtureTruth t;
    t.density = std::move(f);
    t.description = std::move(desc);
    return t;
}

FixtureTruth points_truth(std::vector<Complex> pts, std::string desc) {
    FixtureTruth t;
    t.points = std::move(pts);
    t.description = std::move(desc);
    return t;
}

FixtureTruth branch_truth(std::function<double(double)> f, std::string desc) {
    FixtureTruth t;
    t.branch = std::move(f);
    t.description = std::move(desc);
    return t;
}

Fixture make_a2_jordan() {
    Fixture f;
    f.name = "a2_jordan";
    f.matrix = SquareMatrix::from_real_rows({{0, 2}, {0, 0}});
    f.truths["density"] = density_truth(
        [](Complex z) {
            return closed_form_density(ClosedFormCase::jordan2, {}, z);
        },
        "density 1/(2 pi sqrt(1-|z|^2)) on the open unit disk, 0 outside");
    f.truths["mass"] = scalar_truth(1.0, "total mass of the density is 1");
    f.truths["mean"] = scalar_truth(0.0, "first moment Tr(A)/n = 0");
    f.truths["variance"] = scalar_truth(2.0 / 3.0, "variance (Tr(A*A)/n)/(n+1) = 2/3");
    f.truths["support_radius"] = scalar_truth(1.0, "numerical range is the closed unit disk");
    f.truths["n_outside"] = scalar_truth(2.0, "two tangent lines from any exterior point");
    f.truths["n_inside"] = scalar_truth(0.0, "no tangent lines from interior points");
    return f;
}

Fixture make_a3_shift(double a, double b) {
    if (std::abs(a) + std::abs(b) <= 0.0)
        throw PreconditionError("a3_shift: need |a| + |b| > 0");
    Fixture f;
    f.name = "a3_shift";
    f.matrix = SquareMatrix::from_rows({{0.0, Complex(a), 0.0},
                                        {0.0, 0.0, Complex(b)},
                                        {0.0, 0.0, 0.0}});
    if (std::abs(a * a + b * b - 4.0) < 1e-9) {
        f.truths["density"] = density_truth(
            [](Complex z) {
                return closed_form_density(ClosedFormCase::a3_radial, {}, z);
            },
            "density (1/pi) log((1 + sqrt(1-|z|^2))/|z|) on 0 < |z| < 1");
        f.truths["support_radius"] =
            scalar_truth(1.0, "numerical range is the closed unit disk when a^2+b^2 = 4");
        f.truths["h_eigenvalues"] = points_truth(
            {Complex(-1.0), Complex(0.0), Complex(1.0)},
            "the Hermitian part has constant eigenvalues -1, 0, 1 when a^2+b^2 = 4");
    }
    return f;
}

Fixture make_ellipse(double b, double c) {
    if (!(b > 0.0) || c < 0.0) throw PreconditionError("ellipse: need b > 0, c >= 0");
    Fixture f;
    f.name = "ellipse";
    f.matrix = SquareMatrix::from_real_rows({{-c, 2.0 * b}, {0.0, c}});
    const double a = std::sqrt(b * b + c * c);
    f.truths["density"] = density_truth(
        [b, c](Complex z) {
            return closed_form_density(ClosedFormCase::ellipse2x2, {b, c, 0.0}, z);
        },
        "density 1/(2 pi sqrt(a^2 b^2 - b^2 x^2 - a^2 y^2)) inside the ellipse");
    f.truths["support_function"] = branch_truth(
        [b, c](double theta) {
            const double ct = std::cos(theta);
            return std::sqrt(b * b + c * c * ct * ct);
        },
        "largest eigenvalue sqrt(b^2 + c^2 cos^2 theta)");
    f.truths["semi_major"] = scalar_truth(a, "ellipse semi-axis along x");
    f.truths["semi_minor"] = scalar_truth(b, "ellipse semi-axis along y");
    return f;
}

Fixture make_generic3() {
    Fixture f;
    f.name = "generic3";
    f.matrix = SquareMatrix::from_real_rows({{-1.5, 1.0, 0.0}, {-1.0, 1.0, 1.0}, {0.0, -1.0, 0.5}});
    f.truths["n_outside"] = scalar_truth(3.0, "three tangent lines from the far exterior");
    f.truths["n_triangle"] = scalar_truth(3.0, "three tangent lines inside the cuspidal triangle");
    f.truths["n_intermediate"] =
        scalar_truth(1.0, "one tangent line in the region between the two curves");
    f.truths["crossing_count"] =
        scalar_truth(0.0, "eigenvalue branches stay strictly ordered for all theta");
    f.truths["cycle_signature"] =
        scalar_truth(2.0, "branch permutation splits into one fixed point and one 2-cycle");
    return f;
}

Fixture make_cardioid() {
    Fixture f;
    f.name = "cardioid";
    f.matrix = SquareMatrix::from_real_rows({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}});
    f.truths["lambda1"] = branch_truth(
        [](double t) { return std::cos((t + 2.0 * kPi) / 3.0); },
        "eigenvalue branch cos((theta + 2 pi)/3)");
    f.truths["lambda2"] = branch_truth(
        [](double t) { return std::cos((t - 2.0 * kPi) / 3.0); },
        "eigenvalue branch cos((theta - 2 pi)/3)");
    f.truths["lambda3"] =
        branch_truth([](double t) { return std::cos(t / 3.0); }, "eigenvalue branch cos(theta/3)");
    FixtureTruth curve;
    curve.curve = [](double phi) {
        return (2.0 * std::polar(1.0, phi) + std::polar(1.0, 2.0 * phi)) / 3.0;
    };
    curve.description = "critical curve (2 e^{i phi} + e^{2 i phi})/3";
    f.truths["critical_curve"] = curve;
    const double h = 0.5 / std::sqrt(3.0);
    f.truths["bitangent_endpoints"] = points_truth(
        {Complex(-0.5, h), Complex(-0.5, -h)},
        "single bitangent segment joining -1/2 +- i/(2 sqrt 3)");
    f.truths["cycle_signature"] = scalar_truth(3.0, "branch permutation is a single 3-cycle");
    f.truths["n_outside"] = scalar_truth(3.0, "three tangent lines outside the curve");
    f.truths["n_inside"] = scalar_truth(1.0, "one tangent line inside the cuspidal region");
    f.truths["frobenius_sq"] = scalar_truth(3.0, "Tr(A*A) = 3");
    f.truths["mass"] = scalar_truth(1.0, "total mass of the density is 1");
    return f;
}

Fixture make_reducible(double a) {
    if (a < 0.0) throw PreconditionError("reducible: need a >= 0");
    Fixture f;
    f.name = "reducible";
    f.matrix = SquareMatrix::from_real_rows({{0, 2, 0}, {0, 0, 0}, {0, 0, a}});
    f.truths["density"] = density_truth(
        [a](Complex z) {
            ClosedFormParams p;
            p.a = a;
            return closed_form_density(ClosedFormCase::reducible3, p, z);
        },
        "piecewise closed form: arccosh for a < 1, algebraic at a = 1, arccos plus a "
        "constant plateau for a > 1");
    if (a > 1.0) {
        f.truths["segment_count"] =
            scalar_truth(2.0, "two bitangent segments from the eigenvalue crossings");
        f.truths["plateau_value"] = scalar_truth(
            1.0 / std::sqrt(a * a - 1.0), "density 1/sqrt(a^2-1) between the disk and the hull");
        f.truths["mass"] = scalar_truth(1.0, "total mass of the density is 1");
        f.truths["point_component"] = scalar_truth(
            a, "one critical-curve component degenerates to the point a on the real axis");
    }
    f.truths["branch_top"] = branch_truth(
        [a](double t) { return std::max(1.0, a * std::cos(t)); },
        "largest eigenvalue max(1, a cos theta)");
    return f;
}

Fixture make_normal3(Complex m1, Complex m2, Complex m3) {
    Fixture f;
    f.name = "normal3";
    f.matrix = SquareMatrix::diagonal({m1, m2, m3});
    const double area =
        0.5 * std::abs((m2 - m1).real() * (m3 - m1).imag() - (m2 - m1).imag() * (m3 - m1).real());
    if (area <= 0.0) throw PreconditionError("normal3: eigenvalues must not be collinear");
    f.truths["density"] = density_truth(
        [m1, m2, m3, area](Complex z) {
            // Barycentric membership in the eigenvalue triangle.
            auto cross = [](Complex u, Complex v) {
                return u.real() * v.imag() - u.imag() * v.real();
            };
            const double d1 = cross(m2 - m1, z - m1);
            const double d2 = cross(m3 - m2, z - m2);
            const double d3 = cross(m1 - m3, z - m3);
            const bool inside = (d1 >= 0 && d2 >= 0 && d3 >= 0) || (d1 <= 0 && d2 <= 0 && d3 <= 0);
            return inside ? 1.0 / area : 0.0;
        },
        "uniform density 1/area on the spectral triangle");
    f.truths["critical_points"] =
        points_truth({m1, m2, m3}, "critical curves degenerate to the three eigenvalues");
    f.truths["segment_count"] = scalar_truth(3.0, "bitangent set consists of the triangle edges");
    f.truths["cycle_signature"] = scalar_truth(1.0, "branch permutation is the identity");
    return f;
}

std::vector<double> parse_params(const std::string& spec, std::string& name) {
    const auto open = spec.find('(');
    if (open == std::string::npos) {
        name = spec;
        return {};
    }
    if (spec.back() != ')') throw PreconditionError("fixture: unbalanced parameter list");
    name = spec.substr(0, open);
    std::vector<double> params;
    std::stringstream body(spec.substr(open + 1, spec.size() - open - 2));
    std::string tok;
    while (std::getline(body, tok, ',')) {
        try {
            params.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw PreconditionError("fixture: bad numeric parameter '" + tok + "'");
        }
    }
    return params;
}

} // namespace

Fixture get_fixture(const std::string& spec) {
    std::string name;
    const std::vector<double> p = parse_params(spec, name);
    if (name == "a2_jordan") return make_a2_jordan();
    if (name == "a3_shift") {
        const double a = p.size() > 0 ? p[0] : std::sqrt(2.0);
        const double b = p.size() > 1 ? p[1] : std::sqrt(2.0);
        return make_a3_shift(a, b);
    }
    if (name == "ellipse") {
        const double b = p.size() > 0 ? p[0] : 1.0;
        const double c = p.size() > 1 ? p[1] : 1.0;
        return make_ellipse(b, c);
    }
    if (name == "generic3") return make_generic3();
    if (name == "cardioid") return make_cardioid();
    if (name == "reducible") return make_reducible(p.size() > 0 ? p[0] : 2.0);
    if (name == "normal3") {
        if (p.empty()) return make_normal3(Complex(0, 0), Complex(1, 0), Complex(0, 1));
        if (p.size() != 6)
            throw PreconditionError("normal3 takes six reals: x1,y1,x2,y2,x3,y3");
        return make_normal3(Complex(p[0], p[1]), Complex(p[2], p[3]), Complex(p[4], p[5]));
    }
    throw PreconditionError("unknown fixture: " + spec);
}

std::vector<std::string> fixture_names() {
    return {"a2_jordan", "a3_shift(a,b)",  "ellipse(b,c)", "generic3",
            "cardioid",  "reducible(a)", "normal3(x1,y1,x2,y2,x3,y3)"};
}

} // namespace numeasure
