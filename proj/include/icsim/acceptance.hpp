#pragma once

#include <string>
#include <vector>

namespace icsim::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult complementarity_identity();  // 1
CriterionResult distinguishability_routes(); // 2
CriterionResult low_gain_agreement();        // 3
CriterionResult engine_vs_closed_form();     // 4
CriterionResult oracle_vs_engine();          // 5
CriterionResult overlap_calibration();       // 6
CriterionResult mc_rate_model();             // 7
CriterionResult mc_closed_loop();            // 8
CriterionResult fringe_identity();           // 9

/// Run the suite in order; quick mode keeps only the sub-second checks
/// (1, 2, 3, 4, 6, 9).
std::vector<CriterionResult> run_all(bool quick = false);

/// Pass/fail table, one line per criterion.
std::string format_results(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace icsim::acceptance
