#include "icsim/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "icsim/errors.hpp"

namespace icsim {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

SweepSpec parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 && !(parts.size() == 5 && parts[4] == "log"))
    throw ConfigError("sweep: expected var:start:stop:n[:log], got '" + text + "'");
  SweepSpec spec;
  spec.variable = parts[0];
  if (spec.variable != "t_mag" && spec.variable != "v2" && spec.variable != "gamma_mag")
    throw ConfigError("sweep: unknown variable '" + spec.variable + "'");

  const double start = std::strtod(parts[1].c_str(), nullptr);
  const double stop = std::strtod(parts[2].c_str(), nullptr);
  const long n = std::strtol(parts[3].c_str(), nullptr, 10);
  const bool log_spaced = parts.size() == 5;
  if (n < 1) throw ConfigError("sweep: need at least one grid point");
  if (log_spaced && (start <= 0.0 || stop <= 0.0))
    throw ConfigError("sweep: log spacing needs positive endpoints");

  spec.grid.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double f = (n == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    spec.grid.push_back(log_spaced
                            ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                            : start + f * (stop - start));
  }

  const bool is_unit_interval = spec.variable != "v2";
  for (double v : spec.grid) {
    if (v < 0.0 || (is_unit_interval && v > 1.0))
      throw ConfigError("sweep: grid value " + std::to_string(v) + " outside the range of " +
                        spec.variable);
  }
  return spec;
}

ExperimentParams with_sweep_value(ExperimentParams base, const std::string& variable,
                                  double value) {
  if (variable == "t_mag") {
    base.t_mag = value;
  } else if (variable == "gamma_mag") {
    base.gamma_mag = value;
  } else if (variable == "v2") {
    base.gain = std::asinh(std::sqrt(value));
  } else {
    throw ConfigError("sweep: unknown variable '" + variable + "'");
  }
  return validate(base);
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += fields[i];
  }
  row += '\n';
  return row;
}

}  // namespace icsim
