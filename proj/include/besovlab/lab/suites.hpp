#pragma once

// Experiment suites behind the CLI verbs. Each returns report rows; rows of
// exact identities carry a tolerance and a pass flag, and a failed identity
// is also listed in Report::failures.

#include <string>
#include <vector>

#include "besovlab/lab/config.hpp"
#include "besovlab/lab/report.hpp"

namespace besovlab::lab {

const std::vector<std::string>& suite_names();

/// Dispatches on a CLI verb; "report" runs every other suite. Throws
/// ConfigError for an unknown name.
Report run_suite(const std::string& name, const ExperimentConfig& config);

Report identities_suite(const ExperimentConfig& config);
Report lemma_integrals_suite(const ExperimentConfig& config);
Report trace_ratios_suite(const ExperimentConfig& config);
Report lift_suite(const ExperimentConfig& config);
Report riesz_suite(const ExperimentConfig& config);
Report counterexample_suite(const ExperimentConfig& config);
Report embedding_suite(const ExperimentConfig& config);

}  // namespace besovlab::lab
