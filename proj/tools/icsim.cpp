#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "icsim/acceptance.hpp"
#include "icsim/closed_form.hpp"
#include "icsim/config.hpp"
#include "icsim/counting.hpp"
#include "icsim/errors.hpp"
#include "icsim/fock.hpp"
#include "icsim/gaussian.hpp"
#include "icsim/sweep.hpp"

namespace cf = icsim::closed_form;
namespace ge = icsim::gaussian;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string sweep_text;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "parameter file ([experiment]/[detection] sections)");
  cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
  cmd->add_option("--sweep", args.sweep_text, "var:start:stop:n[:log] with var in {t_mag, v2, gamma_mag}");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&args](const std::uint64_t& v) { args.seed = v; }, "override rng_seed");
  for (const std::string& key : icsim::config_keys()) {
    if (key == "rng_seed") continue;
    cmd->add_option_function<std::string>(
        "--" + key,
        [&args, key](const std::string& v) { args.overrides.emplace_back(key, v); },
        "override config key " + key);
  }
}

icsim::Config resolve_config(const CommonArgs& args) {
  icsim::Config config;
  if (!args.config_path.empty()) config = icsim::load_config(args.config_path);
  for (const auto& [key, value] : args.overrides)
    icsim::apply_override(config, key, value);
  if (args.seed) config.detection.rng_seed = *args.seed;
  config.experiment = icsim::validate(config.experiment);
  config.detection = icsim::validate(config.detection);
  return config;
}

std::vector<icsim::ExperimentParams> sweep_points(const CommonArgs& args,
                                                  const icsim::Config& config) {
  if (args.sweep_text.empty()) return {config.experiment};
  const icsim::SweepSpec spec = icsim::parse_sweep(args.sweep_text);
  std::vector<icsim::ExperimentParams> points;
  points.reserve(spec.grid.size());
  for (double v : spec.grid)
    points.push_back(icsim::with_sweep_value(config.experiment, spec.variable, v));
  return points;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw icsim::ConfigError("cannot open output file '" + out_path + "'");
  out << text;
}

const char* kRowHeader =
    "t_mag,v2,gamma_mag,g13,g23,g13_low,g23_low,D_trace,D_from_g2,D_highgain,g12,V_low,"
    "residual";

struct RowValues {
  double g13, g23, g12, visibility, d_from_g2, residual;
  bool defined = true;  // false on vacuum (v2 = 0): g2 columns are undefined
};

std::string format_row(const icsim::ExperimentParams& p, const RowValues& row,
                       std::optional<double> norm_deficit = std::nullopt) {
  using icsim::format_double;
  const double t = p.t_mag;
  const double v2 = p.v2;
  const double gamma = p.gamma_mag;
  const auto num = [&](double v) {
    return row.defined ? format_double(v) : std::string("nan");
  };
  std::vector<std::string> fields = {
      format_double(t),
      format_double(v2),
      format_double(gamma),
      num(row.g13),
      num(row.g23),
      row.defined ? format_double(cf::g13_low(t, v2)) : "nan",
      row.defined ? format_double(cf::g23_low(t, v2)) : "nan",
      format_double(cf::dist_trace(t, gamma)),
      num(row.d_from_g2),
      format_double(cf::dist_highgain(t, v2)),
      num(row.g12),
      num(row.visibility),
      num(row.residual)};
  if (norm_deficit) fields.push_back(format_double(*norm_deficit));
  return icsim::csv_row(fields);
}

int cmd_analytic(const CommonArgs& args) {
  const icsim::Config config = resolve_config(args);
  std::string text = std::string(kRowHeader) + "\n";
  for (const auto& p : sweep_points(args, config)) {
    RowValues row{};
    row.defined = p.v2 > 0.0;
    if (row.defined) {
      row.g13 = cf::g13_full(p.t_mag, p.v2);
      row.g23 = cf::g23_full(p.t_mag, p.v2);
      row.g12 = cf::g12_coherence(p.t_mag, p.v2);
      row.visibility = cf::visibility_low(p.t_mag, p.gamma_mag);
      row.d_from_g2 = cf::dist_from_g2_overlap(row.g13, row.g23, p.gamma_mag);
      row.residual = cf::complementarity_residual(p.t_mag, p.v2);
    }
    text += format_row(p, row);
  }
  write_output(args.out_path, text);
  return 0;
}

RowValues engine_row(const icsim::ExperimentParams& p) {
  RowValues row{};
  row.defined = p.v2 > 0.0;
  if (!row.defined) return row;
  const ge::MomentState state = ge::build_setup(p);
  const auto det_modes = ge::detected_idler_modes();
  row.g13 = ge::g2_detected(state, ge::kS1, det_modes);
  row.g23 = ge::g2_detected(state, ge::kS2, det_modes);
  row.g12 = ge::g1(state, ge::kS1, ge::kS2);
  row.visibility = ge::fringe_visibility(state, ge::kS1, ge::kS2);
  row.d_from_g2 = cf::dist_from_g2_overlap(row.g13, row.g23, p.gamma_mag);
  row.residual = row.d_from_g2 * row.d_from_g2 + row.g12 * row.g12 - 1.0;
  return row;
}

int cmd_engine(const CommonArgs& args) {
  const icsim::Config config = resolve_config(args);
  std::string text = std::string(kRowHeader) + "\n";
  for (const auto& p : sweep_points(args, config)) text += format_row(p, engine_row(p));
  write_output(args.out_path, text);
  return 0;
}

int cmd_oracle(const CommonArgs& args, int cutoff) {
  const icsim::Config config = resolve_config(args);
  std::string text = std::string(kRowHeader) + ",norm_deficit\n";
  for (const auto& p : sweep_points(args, config)) {
    const auto report = icsim::fock::simulate(p, cutoff);
    RowValues row{};
    row.defined = !report.vacuum;
    if (row.defined) {
      row.g13 = *report.g13;
      row.g23 = *report.g23;
      row.g12 = *report.g12;
      row.visibility = *report.visibility;
      row.d_from_g2 = cf::dist_from_g2_overlap(row.g13, row.g23, p.gamma_mag);
      row.residual = row.d_from_g2 * row.d_from_g2 + row.g12 * row.g12 - 1.0;
    }
    text += format_row(p, row, report.norm_deficit);
  }
  write_output(args.out_path, text);
  return 0;
}

int cmd_mc(const CommonArgs& args, const std::string& arm_text, int delay_points,
           int trials) {
  const icsim::Config config = resolve_config(args);
  const icsim::counting::Arm arm =
      arm_text == "s2" ? icsim::counting::Arm::kS2 : icsim::counting::Arm::kS1;

  const double window = config.detection.t_window;
  std::vector<double> delays(delay_points);
  for (int i = 0; i < delay_points; ++i)
    delays[i] = -2.0 * window +
                4.0 * window * static_cast<double>(i) / std::max(1, delay_points - 1);

  std::string text = "gate_delay_s,rate_hz,rate_err_hz,arm,t_mag,seed\n";
  for (const auto& p : sweep_points(args, config)) {
    const auto hist =
        icsim::counting::delay_scan(p, config.detection, arm, delays, trials);
    for (std::size_t bin = 0; bin < hist.tau_bins.size(); ++bin) {
      text += icsim::csv_row({icsim::format_double(hist.tau_bins[bin]),
                              icsim::format_double(hist.rate_hz(bin)),
                              icsim::format_double(hist.rate_err_hz(bin)),
                              icsim::counting::arm_name(arm),
                              icsim::format_double(p.t_mag),
                              std::to_string(hist.seed)});
    }
  }
  write_output(args.out_path, text);
  return 0;
}

int cmd_validate(bool quick) {
  const auto results = icsim::acceptance::run_all(quick);
  std::cout << icsim::acceptance::format_results(results);
  return icsim::acceptance::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-crystal induced-coherence interferometer toolkit"};
  app.require_subcommand(1);

  CommonArgs analytic_args, engine_args, oracle_args, mc_args;
  int cutoff = 8;
  std::string arm_text = "s1";
  int delay_points = 41;
  int trials = 1;
  bool quick = false;

  CLI::App* analytic = app.add_subcommand("analytic", "closed-form sweep table");
  add_common_options(analytic, analytic_args);

  CLI::App* engine = app.add_subcommand("engine", "Gaussian moment-engine sweep table");
  add_common_options(engine, engine_args);

  CLI::App* oracle = app.add_subcommand("oracle", "truncated Fock-space sweep table");
  add_common_options(oracle, oracle_args);
  oracle->add_option("--cutoff", cutoff, "per-mode photon cutoff")->default_val(8);

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo coincidence histograms");
  add_common_options(mc, mc_args);
  mc->add_option("--arm", arm_text, "signal arm: s1 or s2")
      ->check(CLI::IsMember({"s1", "s2"}))
      ->default_val("s1");
  mc->add_option("--delay-points", delay_points, "gate-delay grid size")->default_val(41);
  mc->add_option("--trials", trials, "independent runs to aggregate")->default_val(1);

  CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_flag("--quick", quick, "only the sub-second checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analytic->parsed()) return cmd_analytic(analytic_args);
    if (engine->parsed()) return cmd_engine(engine_args);
    if (oracle->parsed()) return cmd_oracle(oracle_args, cutoff);
    if (mc->parsed()) return cmd_mc(mc_args, arm_text, delay_points, trials);
    if (validate->parsed()) return cmd_validate(quick);
  } catch (const icsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const icsim::RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const icsim::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const icsim::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
