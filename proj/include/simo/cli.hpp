// simo/cli.hpp
//
// Command-line front end: subcommand dispatch, deterministic seeding,
// matrix-file ingestion, CSV emission (atomic when writing to a file),
// and the exit-code contract:
//   0 success, 1 validation error, 2 numerical failure.

#ifndef SIMO_CLI_HPP
#define SIMO_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simo/matrix.hpp"

namespace simo {

struct RunConfig {
  enum class Command {
    kCheckPropertyA,
    kSpark,
    kRecover,
    kVerifyJacobian,
    kRankLemma,
    kPrelogSweep,
  };

  Command command = Command::kCheckPropertyA;
  std::uint64_t seed = 1;
  std::string output_path;  // empty: standard output
  int threads = 0;          // 0: available parallelism
  double tol = kDefaultRankTol;

  // covariance-factor source: a matrix file, or DFT column selection
  std::string matrix_path;
  int dft_length = 0;         // --dft
  std::vector<int> dft_cols;  // --cols (defaults to 1..cov_rank)

  int block_length = 3;  // --T
  int cov_rank = 2;      // --Q

  // recover / verify-jacobian / rank-lemma
  int trials = 1000;
  Complex pilot{1.0, 0.0};
  std::optional<double> recover_snr_db;  // noisy demo when set
  int lemma_dim = 3;                     // rank-lemma N

  // prelog-sweep
  double snr_db_min = 40.0;
  double snr_db_max = 80.0;
  int grid_points = 9;
  std::int64_t mc_samples = 10000;
  bool freeze_pilot = false;
};

/// Executes one configuration; identical configurations produce
/// byte-identical output regardless of thread count.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv front end around run().
int run_cli(int argc, const char* const* argv);

}  // namespace simo

#endif  // SIMO_CLI_HPP
