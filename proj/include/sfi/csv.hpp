#pragma once

#include <string>
#include <vector>

#include "sfi/decomp.hpp"
#include "sfi/info.hpp"
#include "sfi/sums.hpp"

namespace sfi {

// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

// All writers use '\n' line endings and UTF-8; columns are documented in the
// first row.  Output is deterministic for identical inputs.
void write_density_csv(const std::string& path, const DensityGrid& d,
                       const std::vector<double>& score = {});
void write_charfn_csv(const std::string& path, const CharFnGrid& f);
void write_reports_csv(const std::string& path, const std::vector<InequalityReport>& reports);
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);
void write_values_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& values);

// Minimal log-log polyline plot (SVG).
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace sfi
