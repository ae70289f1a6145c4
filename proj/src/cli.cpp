#include "numeasure/cli.hpp"

#include "numeasure/density.hpp"
#include "numeasure/errors.hpp"
#include "numeasure/fixtures.hpp"
#include "numeasure/io.hpp"
#include "numeasure/parallel.hpp"
#include "numeasure/regions.hpp"
#include "numeasure/stats.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

namespace numeasure {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string matrix_path;
    std::string fixture;
    std::string grid_text;
    std::string out_dir = ".";
    std::string formats = "csv,json,gp";
    int n_theta = 1024;
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    double tol_circle = 1e-6;
    double tol_cross = 0.0;
    int threads = 0;
    int nx = 200, ny = 200;

    bool wants(const std::string& fmt) const {
        return ("," + formats + ",").find("," + fmt + ",") != std::string::npos;
    }
};

SquareMatrix resolve_matrix(const RunConfig& cfg) {
    if (!cfg.matrix_path.empty() && !cfg.fixture.empty())
        throw PreconditionError("give either --matrix or --fixture, not both");
    if (!cfg.matrix_path.empty()) return load_matrix_file(cfg.matrix_path);
    if (!cfg.fixture.empty()) return get_fixture(cfg.fixture).matrix;
    throw PreconditionError("a matrix source is required (--matrix or --fixture)");
}

GridSpec resolve_grid(const RunConfig& cfg, const EigencurveTable& T) {
    if (cfg.grid_text.empty()) return default_density_box(T, cfg.nx, cfg.ny);
    GridSpec g;
    std::stringstream ss(cfg.grid_text);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 6) throw PreconditionError("--grid wants x0,x1,y0,y1,nx,ny");
    g.x0 = vals[0];
    g.x1 = vals[1];
    g.y0 = vals[2];
    g.y1 = vals[3];
    g.nx = static_cast<int>(vals[4]);
    g.ny = static_cast<int>(vals[5]);
    g.validate();
    return g;
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

bool is_scalar_matrix(const SquareMatrix& A) {
    const Complex c = A.trace() / static_cast<double>(A.n);
    SquareMatrix D = A;
    for (int i = 0; i < A.n; ++i) D.at(i, i) -= c;
    return D.frobenius_norm() <= 1e-14 * std::max(1.0, A.frobenius_norm());
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_density(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SquareMatrix A = resolve_matrix(cfg);
    if (is_scalar_matrix(A)) {
        const Complex c = A.trace() / static_cast<double>(A.n);
        json notice{{"notice", "Dirac mass, no density"},
                    {"point", {c.real(), c.imag()}}};
        std::cout << notice.dump() << '\n';
        return 0;
    }
    const Pencil P = make_pencil(A);
    const EigencurveTable T = sample_curves(P, cfg.n_theta);

    if (T.collinear) {
        // Quasi-Hermitian: one-dimensional density along the spectral line.
        const Complex center = A.trace() / static_cast<double>(A.n);
        // Direction of the line from the widest support swing.
        double best = -1.0;
        double phi = 0.0;
        for (int i = 0; i < T.samples(); ++i) {
            const double w = T.lambda(i, T.dim - 1) - T.lambda(i, 0);
            if (w > best) {
                best = w;
                phi = T.theta(i);
            }
        }
        SquareMatrix H(A.n);
        const Complex rot = std::polar(1.0, -phi);
        for (int i = 0; i < A.n; ++i)
            for (int j = 0; j < A.n; ++j) {
                Complex v = rot * (A.at(i, j) - (i == j ? center : Complex(0.0)));
                H.at(i, j) = v;
            }
        // Symmetrize roundoff away; the matrix is Hermitian by construction.
        H = make_pencil(H).a1;
        const EigenDecomposition eig = hermitian_eigen(H);
        const KnotVector knots = KnotVector::regularized(eig.values);
        const int npts = 1001;
        const double pad = 0.05 * knots.range();
        std::ostringstream csv;
        csv << "t,f,re,im\n";
        for (int k = 0; k < npts; ++k) {
            const double t =
                knots.front() - pad + (knots.range() + 2 * pad) * k / double(npts - 1);
            const double f = hermitian_density(knots, t);
            const Complex z = center + std::polar(1.0, phi) * t;
            csv << format_float(t) << ',' << format_float(f) << ',' << format_float(z.real())
                << ',' << format_float(z.imag()) << '\n';
        }
        write_text_file(out_path(cfg, "density1d.csv").string(), csv.str());
        json notice{{"notice", "quasi-Hermitian matrix: wrote one-dimensional density"},
                    {"center", {center.real(), center.imag()}},
                    {"angle", phi},
                    {"file", "density1d.csv"}};
        std::cout << notice.dump() << '\n';
        return 0;
    }

    const GridSpec grid = resolve_grid(cfg, T);
    const DensityGrid dg = density_grid(A, T, grid, cfg.threads);
    double vmax = 0.0, vmin = 1e300;
    for (double v : dg.values) {
        if (std::isnan(v)) continue;
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    if (cfg.wants("csv")) write_density_csv(out_path(cfg, "density.csv").string(), dg);
    json meta{{"mass", dg.mass},       {"min", vmin},
              {"max", vmax},           {"ntheta", cfg.n_theta},
              {"nx", grid.nx},         {"ny", grid.ny},
              {"nan_cells", dg.nan_count}, {"guarded_evals", dg.guarded_evals},
              {"runtime_s", elapsed_s(t0)}};
    if (cfg.wants("json")) write_text_file(out_path(cfg, "density.json").string(), meta.dump(2));
    if (cfg.wants("gp"))
        write_density_gnuplot(out_path(cfg, "density.gp").string(), "density.csv", dg);
    std::cout << meta.dump() << '\n';
    return 0;
}

int cmd_regions(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SquareMatrix A = resolve_matrix(cfg);
    const Pencil P = make_pencil(A);
    const EigencurveTable T = sample_curves(P, cfg.n_theta);
    const GridSpec grid = resolve_grid(cfg, T);
    const RegionMap map = classify_grid(A, T, grid, cfg.tol_circle, cfg.threads);
    const RegionComponents comps = region_components(map);

    if (cfg.wants("csv")) write_regions_csv(out_path(cfg, "regions.csv").string(), map);
    std::map<std::string, double> areas;
    const double cell_area = grid.hx() * grid.hy();
    for (std::size_t k = 0; k < map.n_tangents.size(); ++k)
        if (map.n_tangents[k] >= 0)
            areas[std::to_string(map.n_tangents[k])] += cell_area;
    json meta{{"components", comps.count},
              {"ambiguous_cells", map.ambiguous_count()},
              {"areas_by_n", areas},
              {"runtime_s", elapsed_s(t0)}};
    if (cfg.wants("json")) write_text_file(out_path(cfg, "regions.json").string(), meta.dump(2));
    std::cout << meta.dump() << '\n';
    return 0;
}

int cmd_singular(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SquareMatrix A = resolve_matrix(cfg);
    const Pencil P = make_pencil(A);
    const EigencurveTable T = sample_curves(P, cfg.n_theta);
    const auto points = critical_points(T);
    const CrossingReport crossings = detect_crossings(T, cfg.tol_cross);
    if (cfg.wants("csv")) {
        write_curves_csv(out_path(cfg, "curves.csv").string(), points);
        write_bitangents_csv(out_path(cfg, "bitangents.csv").string(), crossings.segments);
        write_eigencurves_csv(out_path(cfg, "eigencurves.csv").string(), T);
    }
    json meta{{"critical_points", points.size()},
              {"crossing_events", crossings.events.size()},
              {"bitangent_segments", crossings.segments.size()},
              {"runtime_s", elapsed_s(t0)}};
    std::cout << meta.dump() << '\n';
    return 0;
}

int cmd_stats(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SquareMatrix A = resolve_matrix(cfg);
    const MomentReport exact = exact_moments(A);
    const MeasureSamples ms = mc_measure(A, cfg.n_samples, cfg.seed, cfg.threads);
    if (cfg.wants("csv")) write_samples_csv(out_path(cfg, "samples.csv").string(), ms.samples);
    json meta{{"exact",
               {{"mean", {exact.mean.real(), exact.mean.imag()}},
                {"variance", exact.variance},
                {"hermitian_moments", exact.hermitian_moments}}},
              {"empirical",
               {{"mean", {ms.summary.mean.real(), ms.summary.mean.imag()}},
                {"variance", ms.summary.variance},
                {"abs2", ms.summary.abs2},
                {"abs4", ms.summary.abs4}}},
              {"n_samples", cfg.n_samples},
              {"seed", cfg.seed},
              {"runtime_s", elapsed_s(t0)}};
    if (cfg.wants("json")) write_text_file(out_path(cfg, "moments.json").string(), meta.dump(2));
    std::cout << meta.dump() << '\n';
    return 0;
}

int cmd_clt(const RunConfig& cfg, const std::string& nlist_text) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<int> n_list;
    std::stringstream ss(nlist_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) n_list.push_back(std::stoi(tok));
    if (n_list.empty()) throw PreconditionError("--nlist wants a comma list of sizes");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw PreconditionError("--nlist must be strictly ascending");
    const CltReport rep = clt_experiment_jordan(n_list, cfg.n_samples, cfg.seed, cfg.threads);
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n},
                        {"a", r.a},
                        {"b", r.b},
                        {"e_re2", r.e_re2},
                        {"e_im2", r.e_im2},
                        {"e_abs4", r.e_abs4},
                        {"t_re2", r.t_re2},
                        {"t_im2", r.t_im2},
                        {"t_abs4", r.t_abs4},
                        {"degenerate", r.degenerate}});
    json meta{{"family", "jordan"},
              {"n_samples", cfg.n_samples},
              {"seed", cfg.seed},
              {"rows", rows},
              {"runtime_s", elapsed_s(t0)}};
    write_text_file(out_path(cfg, "clt_report.json").string(), meta.dump(2));
    std::cout << meta.dump() << '\n';
    return 0;
}

int cmd_examples() {
    for (const std::string& name : fixture_names()) {
        const Fixture f = get_fixture(name.substr(0, name.find('(')));
        std::cout << name << "  (n = " << f.matrix.n << ")\n";
        for (const auto& [key, truth] : f.truths)
            std::cout << "  - " << key << ": " << truth.description << '\n';
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"numerical measure toolkit: densities, regions, singular sets, moments"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool wants_grid) {
        sub->add_option("--matrix", cfg.matrix_path, "path to a matrix JSON file");
        sub->add_option("--fixture", cfg.fixture, "built-in fixture name, e.g. reducible(2)");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", cfg.formats, "any of csv,json,gp (comma separated)");
        sub->add_option("--ntheta", cfg.n_theta, "angular samples")->check(CLI::PositiveNumber);
        sub->add_option("--threads", cfg.threads, "worker threads (default: logical cores)");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--nsamples", cfg.n_samples, "Monte Carlo sample count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol-circle", cfg.tol_circle, "unit-circle root tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol-cross", cfg.tol_cross, "crossing detection tolerance");
        if (wants_grid) {
            sub->add_option("--grid", cfg.grid_text, "x0,x1,y0,y1,nx,ny");
            sub->add_option("--nx", cfg.nx, "default-box x resolution");
            sub->add_option("--ny", cfg.ny, "default-box y resolution");
        }
    };

    auto* density = app.add_subcommand("density", "sample the planar density on a grid");
    add_common(density, true);
    auto* regions = app.add_subcommand("regions", "tangent counts and polynomial regions");
    add_common(regions, true);
    auto* singular = app.add_subcommand("singular", "critical curves and bitangent segments");
    add_common(singular, false);
    auto* stats = app.add_subcommand("stats", "exact and Monte Carlo moments");
    add_common(stats, false);
    auto* clt = app.add_subcommand("clt", "scaled-measure limit experiment (Jordan family)");
    add_common(clt, false);
    std::string nlist_text = "16,64,256";
    clt->add_option("--nlist", nlist_text, "ascending matrix sizes");
    app.add_subcommand("examples", "list built-in fixtures and their ground truths");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help
        std::cerr << nlohmann::json{{"error", e.what()}, {"module", "cli"}}.dump() << '\n';
        return 2;
    }

    try {
        if (density->parsed()) return cmd_density(cfg);
        if (regions->parsed()) return cmd_regions(cfg);
        if (singular->parsed()) return cmd_singular(cfg);
        if (stats->parsed()) return cmd_stats(cfg);
        if (clt->parsed()) return cmd_clt(cfg, nlist_text);
        return cmd_examples();
    } catch (const PreconditionError& e) {
        std::cerr << nlohmann::json{{"error", e.what()}, {"module", "input"}}.dump() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << nlohmann::json{{"error", e.what()}, {"module", "numerics"}}.dump() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}, {"module", "unknown"}}.dump() << '\n';
        return 3;
    }
}

} // namespace numeasure
