#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nbproc/models.hpp"

namespace nbproc {

/// Outcome of one self-check. `value` is the checked quantity (a TV
/// distance, a relative error, a max |z|), compared against `threshold`.
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;  // Geweke at 2e4 / 2e4 draws instead of 5e4 / 5e4
  Fault fault = Fault::kNone;
  std::uint64_t seed = 20120621;
  bool distributions = true;
  bool geweke = true;
};

/// Empirical PMF of non-negative integer draws.
Eigen::VectorXd empirical_pmf(const std::vector<std::int64_t>& draws);

/// Total variation distance; the shorter vector is zero-padded.
double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Exact-identity and sampler-agreement checks of the distributions module.
std::vector<CheckResult> distribution_checks(std::uint64_t seed);

/// Geweke checks of every distinct Gibbs kernel (LDA covers Dir-PFA).
std::vector<CheckResult> geweke_checks(const ValidationOptions& options, std::ostream* progress = nullptr);

/// Both suites as selected by `options`.
std::vector<CheckResult> run_validation(const ValidationOptions& options, std::ostream* progress = nullptr);

/// Fixed-width pass/fail table.
void print_check_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace nbproc
