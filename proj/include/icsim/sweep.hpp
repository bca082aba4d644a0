#pragma once

#include <string>
#include <vector>

#include "icsim/params.hpp"

namespace icsim {

/// One swept variable over an explicit grid.
struct SweepSpec {
  std::string variable;  // t_mag | v2 | gamma_mag
  std::vector<double> grid;
};

/// Parse "var:start:stop:n" (linear) or "var:start:stop:n:log".
/// Validates the variable name and that the grid stays in its legal range.
SweepSpec parse_sweep(const std::string& text);

/// Return params with the swept variable set; sweeping v2 sets
/// gain = asinh(sqrt(v2)).  Result is validated.
ExperimentParams with_sweep_value(ExperimentParams base, const std::string& variable,
                                  double value);

/// Shortest-round-trip decimal formatting (17 significant digits).
std::string format_double(double value);

/// Join fields with commas and a trailing newline.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace icsim
