#include "numeasure/io.hpp"

#include "numeasure/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace numeasure {

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot open output file: " + path);
    return out;
}

} // namespace

void write_text_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

void write_density_csv(const std::string& path, const DensityGrid& grid) {
    auto out = open_out(path);
    out << "x,y,f\n";
    for (int i = 0; i < grid.grid.nx; ++i) {
        for (int j = 0; j < grid.grid.ny; ++j)
            out << format_float(grid.grid.x(i)) << ',' << format_float(grid.grid.y(j)) << ','
                << format_float(grid.value(i, j)) << '\n';
        out << '\n'; // grid block separator for gnuplot splot
    }
}

void write_regions_csv(const std::string& path, const RegionMap& map) {
    auto out = open_out(path);
    out << "x,y,n,inside,pi\n";
    for (int i = 0; i < map.grid.nx; ++i)
        for (int j = 0; j < map.grid.ny; ++j) {
            const std::size_t k = map.grid.index(i, j);
            out << format_float(map.grid.x(i)) << ',' << format_float(map.grid.y(j)) << ','
                << map.n_tangents[k] << ',' << int(map.inside[k]) << ',' << int(map.pi_mask[k])
                << '\n';
        }
}

void write_curves_csv(const std::string& path, const std::vector<CriticalPoint>& points) {
    auto out = open_out(path);
    out << "x,y,branch\n";
    for (const auto& p : points)
        out << format_float(p.z.real()) << ',' << format_float(p.z.imag()) << ',' << p.branch
            << '\n';
}

void write_bitangents_csv(const std::string& path, const std::vector<BitangentSegment>& segments) {
    auto out = open_out(path);
    out << "x1,y1,x2,y2,theta\n";
    for (const auto& s : segments)
        out << format_float(s.a.real()) << ',' << format_float(s.a.imag()) << ','
            << format_float(s.b.real()) << ',' << format_float(s.b.imag()) << ','
            << format_float(s.theta) << '\n';
}

void write_eigencurves_csv(const std::string& path, const EigencurveTable& T) {
    auto out = open_out(path);
    out << "theta";
    for (int j = 0; j < T.dim; ++j) out << ",lambda_" << (j + 1);
    for (int j = 0; j < T.dim; ++j) out << ",dlambda_" << (j + 1);
    out << '\n';
    for (int i = 0; i < T.samples(); ++i) {
        out << format_float(T.theta(i));
        for (int j = 0; j < T.dim; ++j) out << ',' << format_float(T.lambda(i, j));
        for (int j = 0; j < T.dim; ++j) out << ',' << format_float(T.dlambda(i, j));
        out << '\n';
    }
}

void write_samples_csv(const std::string& path, const std::vector<Complex>& samples) {
    auto out = open_out(path);
    out << "re,im\n";
    for (const Complex& z : samples)
        out << format_float(z.real()) << ',' << format_float(z.imag()) << '\n';
}

void write_density_gnuplot(const std::string& path, const std::string& csv_name,
                           const DensityGrid& grid) {
    std::ostringstream gp;
    gp << "# Contour and surface views of " << csv_name << "\n"
       << "set datafile separator comma\n"
       << "set term pngcairo size 1280,520\n"
       << "set output 'density.png'\n"
       << "set multiplot layout 1,2\n"
       << "set xrange [" << grid.grid.x0 << ':' << grid.grid.x1 << "]\n"
       << "set yrange [" << grid.grid.y0 << ':' << grid.grid.y1 << "]\n"
       << "set view map\n"
       << "unset surface\n"
       << "set contour base\n"
       << "set cntrparam levels auto 14\n"
       << "set style data lines\n"
       << "splot '" << csv_name << "' skip 1 using 1:2:3 notitle\n"
       << "set surface\n"
       << "unset contour\n"
       << "unset view\n"
       << "set hidden3d\n"
       << "splot '" << csv_name << "' skip 1 using 1:2:3 notitle with lines\n"
       << "unset multiplot\n";
    write_text_file(path, gp.str());
}

} // namespace numeasure
