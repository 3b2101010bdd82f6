#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "condlab/bases.hpp"
#include "condlab/scalar.hpp"

namespace condlab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kParse = 2,
  kBudgetExhausted = 3,
};

struct AnalysisOptions {
  Mode mode = Mode::Exact;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t samples = 64;
  std::size_t m_max = 0;  ///< 0 means the dimension
  std::string out_dir = ".";
};

/// Runs the full analysis of one basis and writes report.csv, summary.json
/// and witnesses/ under options.out_dir. Returns kBudgetExhausted when
/// exact mode was requested but no k_m value could be certified.
int analyze(const Basis& b, const std::string& basis_id, const AnalysisOptions& options,
            std::ostream& log);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace condlab::cli
