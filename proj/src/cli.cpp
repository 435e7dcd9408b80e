// simo/cli.cpp

#include "simo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "simo/channel.hpp"
#include "simo/jacobian.hpp"
#include "simo/parallel.hpp"
#include "simo/prelog.hpp"
#include "simo/property_a.hpp"
#include "simo/recovery.hpp"
#include "simo/rng.hpp"

namespace simo {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Write-to-temp plus rename: no partial output file on failure.
int emit(const RunConfig& cfg, const std::string& payload, std::ostream& out,
         std::ostream& err) {
  if (cfg.output_path.empty()) {
    out << payload;
    return 0;
  }
  namespace fs = std::filesystem;
  const std::string tmp = cfg.output_path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << tmp << " for writing\n";
      return 1;
    }
    file << payload;
    if (!file) {
      err << "error: write failed for " << tmp << "\n";
      return 1;
    }
  }
  std::error_code ec;
  fs::rename(tmp, cfg.output_path, ec);
  if (ec) {
    err << "error: cannot rename " << tmp << ": " << ec.message() << "\n";
    fs::remove(tmp, ec);
    return 1;
  }
  return 0;
}

IndexSet column_set(std::vector<int> cols, int bound) {
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
    throw std::invalid_argument("--cols: duplicate column index");
  return IndexSet(std::move(cols), bound);
}

// Factor for the T/Q subcommands: a matrix file wins, otherwise a DFT
// column selection (columns default to 1..Q).
CovarianceFactor resolve_factor(const RunConfig& cfg) {
  if (!cfg.matrix_path.empty())
    return CovarianceFactor::from_matrix(read_matrix_file(cfg.matrix_path),
                                         cfg.tol);
  const int t = cfg.block_length;
  const int q = cfg.cov_rank;
  if (q < 1 || q >= t)
    throw std::invalid_argument("need 1 <= Q < T");
  std::vector<int> cols = cfg.dft_cols;
  if (cols.empty())
    for (int c = 1; c <= q; ++c) cols.push_back(c);
  if (static_cast<int>(cols.size()) != q)
    throw std::invalid_argument("--cols must select exactly Q columns");
  return dft_covariance_factor(t, column_set(std::move(cols), t));
}

// Raw matrix for check-property-a and spark.
ComplexMatrix resolve_matrix(const RunConfig& cfg) {
  if (!cfg.matrix_path.empty()) return read_matrix_file(cfg.matrix_path);
  if (cfg.dft_length < 2)
    throw std::invalid_argument("need --matrix FILE or --dft T --cols ...");
  if (cfg.dft_cols.empty())
    throw std::invalid_argument("--dft requires --cols");
  return dft_covariance_factor(cfg.dft_length,
                               column_set(cfg.dft_cols, cfg.dft_length))
      .matrix();
}

int cmd_check_property_a(const RunConfig& cfg, std::ostream& out,
                         std::ostream& err) {
  const ComplexMatrix m = resolve_matrix(cfg);
  const int t = static_cast<int>(m.rows());
  const int q = static_cast<int>(m.cols());
  if (q < 1 || t < q + 1)
    throw std::invalid_argument(
        "check-property-a: matrix needs at least Q+1 rows and Q >= 1");
  const ComplexMatrix slice = m.topRows(q + 1);
  const PropertyAReport rep = satisfies_property_a(slice, cfg.tol);
  const std::optional<int> spark = row_spark(slice, cfg.tol);
  const std::optional<IndexSet> admissible = find_admissible_subset(m, cfg.tol);

  std::ostringstream os;
  os << "rows=" << t << " cols=" << q << " tol=" << fmt(cfg.tol) << "\n";
  os << "canonical_rows=" << IndexSet::range(1, q + 1, t) << "\n";
  os << "property_a=" << (rep.satisfied ? "SATISFIED" : "NOT_SATISFIED")
     << "\n";
  if (rep.failing_row_subset)
    os << "failing_rows=" << *rep.failing_row_subset << "\n";
  if (spark)
    os << "row_spark=" << *spark << "\n";
  else
    os << "row_spark=none\n";
  if (admissible)
    os << "admissible_subset=" << *admissible << "\n";
  else
    os << "admissible_subset=none\n";
  return emit(cfg, os.str(), out, err);
}

int cmd_spark(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ComplexMatrix m = resolve_matrix(cfg);
  const std::optional<int> spark = row_spark(m, cfg.tol);
  std::ostringstream os;
  os << "rows=" << m.rows() << " cols=" << m.cols() << " tol=" << fmt(cfg.tol)
     << "\n";
  if (spark)
    os << "row_spark=" << *spark << "\n";
  else
    os << "row_spark=none\n";
  return emit(cfg, os.str(), out, err);
}

int cmd_recover(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  if (cfg.pilot == Complex(0.0, 0.0))
    throw std::invalid_argument("zero pilot: use a nonzero --pilot value");
  const CovarianceFactor factor = resolve_factor(cfg);
  const int t = factor.block_length();
  const int q = factor.rank();
  const IndexSet j_set = index_set_J(t, q, q);
  const double snr = cfg.recover_snr_db
                         ? std::pow(10.0, *cfg.recover_snr_db / 10.0)
                         : 0.0;

  enum Status { kOk = 0, kSingular = 1, kZeroSymbol = 2 };
  struct Row {
    double cond = 0.0;
    double err_x = 0.0;
    double err_s = 0.0;
    int status = kOk;
  };
  std::vector<Row> rows(static_cast<size_t>(cfg.trials));
  const Rng root(cfg.seed);

  parallel_for(cfg.trials, cfg.threads, [&](std::int64_t i) {
    Rng rs = root.substream(static_cast<std::uint64_t>(i));
    ComplexVector x(t);
    x(0) = cfg.pilot;
    for (int k = 1; k < t; ++k) x(k) = rs.cgauss();
    const ComplexVector s_stacked = rs.cgauss_vector(q * q);
    const ComplexVector y_tilde = noiseless_output(factor, x, s_stacked);

    Row& row = rows[static_cast<size_t>(i)];
    RecoverySystem sys;
    try {
      RecoveryResult res;
      if (cfg.recover_snr_db) {
        const ComplexVector w = rs.cgauss_vector(q * t);
        const ComplexVector y = apply_channel(factor, x, s_stacked, w, snr);
        const ComplexVector y_j = subvector(y, j_set);
        sys = build_recovery_system(factor, y_j / std::sqrt(snr), cfg.pilot,
                                    t, q);
        res = recover_noisy_demo(factor, y_j, cfg.pilot, t, q, snr);
      } else {
        sys = build_recovery_system(factor, subvector(y_tilde, j_set),
                                    cfg.pilot, t, q);
        res = solve_recovery(sys);
      }
      row.cond = res.condition;
      for (int k = 1; k < t; ++k)
        row.err_x = std::max(row.err_x,
                             std::abs(res.x_hat(k) - x(k)) / std::abs(x(k)));
      for (int k = 0; k < q * q; ++k)
        row.err_s = std::max(row.err_s, std::abs(res.s_hat(k) - s_stacked(k)) /
                                            std::abs(s_stacked(k)));
    } catch (const ZeroSymbolError&) {
      row.status = kZeroSymbol;
      row.cond = condition_number(sys.g);
      row.err_x = row.err_s = std::numeric_limits<double>::quiet_NaN();
    } catch (const SingularSystemError&) {
      row.status = kSingular;
      row.cond = condition_number(sys.g);
      row.err_x = row.err_s = std::numeric_limits<double>::quiet_NaN();
    }
  });

  int n_ok = 0, n_singular = 0, n_zero = 0;
  std::ostringstream os;
  os << "trial,cond,max_rel_err_x,max_rel_err_s,status\n";
  for (int i = 0; i < cfg.trials; ++i) {
    const Row& row = rows[static_cast<size_t>(i)];
    const char* status = row.status == kOk ? "ok"
                         : row.status == kSingular ? "singular"
                                                   : "zero_symbol";
    os << i << ',' << fmt(row.cond) << ',' << fmt(row.err_x) << ','
       << fmt(row.err_s) << ',' << status << "\n";
    if (row.status == kOk)
      ++n_ok;
    else if (row.status == kSingular)
      ++n_singular;
    else
      ++n_zero;
  }
  os << "# ok=" << n_ok << " singular=" << n_singular
     << " zero_symbol=" << n_zero << " trials=" << cfg.trials << "\n";
  const int rc = emit(cfg, os.str(), out, err);
  if (rc != 0) return rc;
  // tolerance budget: fewer than 99% clean trials is a numerical failure
  return (100LL * n_ok >= 99LL * cfg.trials) ? 0 : 2;
}

int cmd_verify_jacobian(const RunConfig& cfg, std::ostream& out,
                        std::ostream& err) {
  if (cfg.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  const CovarianceFactor factor = resolve_factor(cfg);
  struct Row {
    double direct = 0.0;
    double factored = 0.0;
    double rel_err = 0.0;
    int redraws = 0;
  };
  std::vector<Row> rows(static_cast<size_t>(cfg.trials));
  const Rng root(cfg.seed);
  parallel_for(cfg.trials, cfg.threads, [&](std::int64_t i) {
    Rng rs = root.substream(static_cast<std::uint64_t>(i));
    const AdmissibleDraw d = draw_admissible(factor, rs);
    const JacobianFactorization f = factored_abs_det(factor, d.x, d.s);
    Row& row = rows[static_cast<size_t>(i)];
    row.direct = f.abs_det_direct;
    row.factored = f.abs_det_factored;
    const double denom = std::max(f.abs_det_direct, f.abs_det_factored);
    row.rel_err =
        denom == 0.0 ? 0.0 : std::abs(f.abs_det_direct - f.abs_det_factored) /
                                 denom;
    row.redraws = d.redraws;
  });

  double max_rel = 0.0;
  long redraws = 0;
  std::ostringstream os;
  os << "trial,abs_det_direct,abs_det_factored,rel_err\n";
  for (int i = 0; i < cfg.trials; ++i) {
    const Row& row = rows[static_cast<size_t>(i)];
    os << i << ',' << fmt(row.direct) << ',' << fmt(row.factored) << ','
       << fmt(row.rel_err) << "\n";
    max_rel = std::max(max_rel, row.rel_err);
    redraws += row.redraws;
  }
  os << "# max_rel_err=" << fmt(max_rel) << " redraws=" << redraws << "\n";
  return emit(cfg, os.str(), out, err);
}

int cmd_rank_lemma(const RunConfig& cfg, std::ostream& out,
                   std::ostream& err) {
  if (cfg.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  if (cfg.lemma_dim < 1) throw std::invalid_argument("--N must be >= 1");
  const int n = cfg.lemma_dim;
  std::vector<Lemma3Report> reports(static_cast<size_t>(cfg.trials));
  const Rng root(cfg.seed);
  parallel_for(cfg.trials, cfg.threads, [&](std::int64_t i) {
    Rng rs = root.substream(static_cast<std::uint64_t>(i));
    reports[static_cast<size_t>(i)] =
        lemma3_check(rs.cgauss_matrix(n + 1, n), cfg.tol);
  });

  int held = 0, full = 0, violations = 0;
  std::ostringstream os;
  os << "trial,hypothesis_holds,mhat_full_rank,violation\n";
  for (int i = 0; i < cfg.trials; ++i) {
    const Lemma3Report& rep = reports[static_cast<size_t>(i)];
    const bool violation = rep.hypothesis_holds && !rep.mhat_full_rank;
    os << i << ',' << (rep.hypothesis_holds ? 1 : 0) << ','
       << (rep.mhat_full_rank ? 1 : 0) << ',' << (violation ? 1 : 0) << "\n";
    held += rep.hypothesis_holds ? 1 : 0;
    full += rep.mhat_full_rank ? 1 : 0;
    violations += violation ? 1 : 0;
  }
  os << "# N=" << n << " trials=" << cfg.trials << " hypothesis_held=" << held
     << " full_rank=" << full << " violations=" << violations << "\n";
  const int rc = emit(cfg, os.str(), out, err);
  if (rc != 0) return rc;
  return violations == 0 ? 0 : 2;
}

int cmd_prelog_sweep(const RunConfig& cfg, std::ostream& out,
                     std::ostream& err) {
  if (cfg.grid_points < 3)
    throw std::invalid_argument("--points must be >= 3");
  if (cfg.mc_samples < 2)
    throw std::invalid_argument("--samples must be >= 2");
  if (!(cfg.snr_db_max > cfg.snr_db_min))
    throw std::invalid_argument("--snr-db-max must exceed --snr-db-min");
  const CovarianceFactor factor = resolve_factor(cfg);

  std::vector<double> grid_db(static_cast<size_t>(cfg.grid_points));
  std::vector<double> grid(static_cast<size_t>(cfg.grid_points));
  for (int p = 0; p < cfg.grid_points; ++p) {
    grid_db[static_cast<size_t>(p)] =
        cfg.snr_db_min + (cfg.snr_db_max - cfg.snr_db_min) *
                             static_cast<double>(p) /
                             static_cast<double>(cfg.grid_points - 1);
    grid[static_cast<size_t>(p)] =
        std::pow(10.0, grid_db[static_cast<size_t>(p)] / 10.0);
  }
  const std::optional<Complex> pilot =
      cfg.freeze_pilot ? std::optional<Complex>(Complex(1.0, 0.0))
                       : std::nullopt;
  const BoundCurve curve = prelog_sweep(factor, grid, cfg.mc_samples,
                                        Rng(cfg.seed), cfg.threads, pilot);

  std::ostringstream os;
  os << "snr_db,bound_bits,std_err\n";
  for (size_t p = 0; p < curve.points.size(); ++p)
    os << fmt(grid_db[p]) << ',' << fmt(curve.points[p].bound_bits) << ','
       << fmt(curve.points[p].std_err) << "\n";
  os << "# fitted_slope=" << fmt(curve.fitted_slope)
     << " target_slope=" << fmt(target_slope(factor.block_length()))
     << " siso_reference="
     << fmt(siso_reference_slope(factor.block_length(), factor.rank()))
     << "\n";
  return emit(cfg, os.str(), out, err);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case RunConfig::Command::kCheckPropertyA:
        return cmd_check_property_a(config, out, err);
      case RunConfig::Command::kSpark:
        return cmd_spark(config, out, err);
      case RunConfig::Command::kRecover:
        return cmd_recover(config, out, err);
      case RunConfig::Command::kVerifyJacobian:
        return cmd_verify_jacobian(config, out, err);
      case RunConfig::Command::kRankLemma:
        return cmd_rank_lemma(config, out, err);
      case RunConfig::Command::kPrelogSweep:
        return cmd_prelog_sweep(config, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  err << "error: unknown subcommand\n";
  return 1;
}

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Correlated block-fading SIMO channel laboratory"};
  app.require_subcommand(1);

  double pilot_re = 1.0, pilot_im = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed (all randomness)");
    sub->add_option("--out", cfg.output_path, "output file (default stdout)");
    sub->add_option("--threads", cfg.threads,
                    "worker threads, 0 = available parallelism");
    sub->add_option("--tol", cfg.tol, "numerical rank tolerance");
  };
  auto add_matrix_source = [&](CLI::App* sub) {
    sub->add_option("--matrix", cfg.matrix_path, "matrix file to load");
    sub->add_option("--dft", cfg.dft_length, "DFT size T");
    sub->add_option("--cols", cfg.dft_cols, "DFT columns to keep (1-based)")
        ->delimiter(',');
  };
  auto add_factor_params = [&](CLI::App* sub) {
    sub->add_option("--T", cfg.block_length, "block length");
    sub->add_option("--Q", cfg.cov_rank, "covariance rank (= antennas)");
    sub->add_option("--cols", cfg.dft_cols, "DFT columns to keep (1-based)")
        ->delimiter(',');
    sub->add_option("--matrix", cfg.matrix_path,
                    "covariance factor file (overrides --T/--Q/--cols)");
  };

  CLI::App* check = app.add_subcommand(
      "check-property-a",
      "certify row independence of the leading factor rows");
  add_common(check);
  add_matrix_source(check);

  CLI::App* spark = app.add_subcommand(
      "spark", "smallest linearly dependent row set of a matrix");
  add_common(spark);
  add_matrix_source(spark);

  CLI::App* recover = app.add_subcommand(
      "recover", "pilot-anchored round-trip recovery trials");
  add_common(recover);
  add_factor_params(recover);
  recover->add_option("--trials", cfg.trials, "number of trials");
  recover->add_option("--pilot-re", pilot_re, "pilot symbol, real part");
  recover->add_option("--pilot-im", pilot_im, "pilot symbol, imaginary part");
  double snr_db_demo = 0.0;
  CLI::Option* demo_opt = recover->add_option(
      "--snr-db", snr_db_demo,
      "demo only: recover from noisy output at this SNR (least squares)");

  CLI::App* verify = app.add_subcommand(
      "verify-jacobian",
      "compare direct and factored Jacobian determinants");
  add_common(verify);
  add_factor_params(verify);
  verify->add_option("--trials", cfg.trials, "number of draws");

  CLI::App* lemma = app.add_subcommand(
      "rank-lemma", "full-rank check of the factor-only matrix");
  add_common(lemma);
  lemma->add_option("--N", cfg.lemma_dim, "factor columns N");
  lemma->add_option("--trials", cfg.trials, "number of random factors");

  CLI::App* sweep = app.add_subcommand(
      "prelog-sweep", "capacity lower bound across an SNR grid");
  add_common(sweep);
  add_factor_params(sweep);
  sweep->add_option("--snr-db-min", cfg.snr_db_min, "grid start in dB");
  sweep->add_option("--snr-db-max", cfg.snr_db_max, "grid end in dB");
  sweep->add_option("--points", cfg.grid_points, "grid points");
  sweep->add_option("--samples", cfg.mc_samples, "Monte Carlo samples/point");
  sweep->add_flag("--freeze-pilot", cfg.freeze_pilot,
                  "pin the pilot symbol to 1 instead of sampling it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.pilot = Complex(pilot_re, pilot_im);
  if (*demo_opt) cfg.recover_snr_db = snr_db_demo;

  if (app.got_subcommand(check))
    cfg.command = RunConfig::Command::kCheckPropertyA;
  else if (app.got_subcommand(spark))
    cfg.command = RunConfig::Command::kSpark;
  else if (app.got_subcommand(recover))
    cfg.command = RunConfig::Command::kRecover;
  else if (app.got_subcommand(verify))
    cfg.command = RunConfig::Command::kVerifyJacobian;
  else if (app.got_subcommand(lemma))
    cfg.command = RunConfig::Command::kRankLemma;
  else if (app.got_subcommand(sweep))
    cfg.command = RunConfig::Command::kPrelogSweep;

  return run(cfg, std::cout, std::cerr);
}

}  // namespace simo
