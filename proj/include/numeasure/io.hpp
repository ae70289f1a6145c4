#pragma once

#include "numeasure/density.hpp"
#include "numeasure/regions.hpp"
#include "numeasure/spectral.hpp"

#include <string>
#include <vector>

namespace numeasure {

// One float, 17 significant digits (round-trip exact).
std::string format_float(double v);

// density.csv: header "x,y,f", rows grouped by x with a blank separator line
// so gnuplot can treat the file as a surface grid.
void write_density_csv(const std::string& path, const DensityGrid& grid);

// regions.csv: "x,y,n,inside,pi".
void write_regions_csv(const std::string& path, const RegionMap& map);

// curves.csv: "x,y,branch"; bitangents.csv: "x1,y1,x2,y2,theta".
void write_curves_csv(const std::string& path, const std::vector<CriticalPoint>& points);
void write_bitangents_csv(const std::string& path, const std::vector<BitangentSegment>& segments);

// eigencurves.csv: "theta,lambda_1..lambda_n,dlambda_1..dlambda_n".
void write_eigencurves_csv(const std::string& path, const EigencurveTable& T);

// samples.csv: "re,im".
void write_samples_csv(const std::string& path, const std::vector<Complex>& samples);

// Gnuplot script with a contour view and a surface view of density.csv.
void write_density_gnuplot(const std::string& path, const std::string& csv_name,
                           const DensityGrid& grid);

void write_text_file(const std::string& path, const std::string& content);

} // namespace numeasure
