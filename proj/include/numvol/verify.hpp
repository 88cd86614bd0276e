#pragma once

#include <string>
#include <vector>

#include "numvol/optimize.hpp"
#include "numvol/varieties.hpp"

namespace numvol {

struct Check {
  std::string suite;
  std::string variety;
  std::string name;
  double measured = 0;
  double bound = 0;
  /// "<=", ">=" or "==" between measured and bound.
  std::string relation;
  bool pass = false;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  bool passed() const;
};

struct VerifyOptions {
  /// duality | properties | zariski | example31 | all
  std::string suite = "all";
  /// Empty selects the default varieties of each suite.
  std::vector<NumericalVariety> varieties;
  OptConfig config;
  /// Multiplies every sample count; 1 gives the full acceptance sizes.
  double sample_scale = 1.0;
};

std::vector<std::string> suite_names();
VerifyReport run_verify(const VerifyOptions& options);

}  // namespace numvol
