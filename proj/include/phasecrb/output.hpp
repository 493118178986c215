#pragma once

#include <string>
#include <vector>

#include "phasecrb/asymptotic.hpp"

namespace phasecrb {

/// Writes `content` to a temporary file next to `path` and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// 17 significant digits, '.' decimal point, independent of the global locale. NaN prints empty.
std::string format_double(double v);

/// CSV with a header row; every cell goes through format_double.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Heatmap of a surface (gamma fastest) with a viridis palette; missing cells are grey.
std::string surface_svg(const std::vector<SurfaceCell>& cells, std::size_t gamma_count, std::size_t tau_count);

} // namespace phasecrb
