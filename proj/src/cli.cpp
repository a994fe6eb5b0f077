#include "twistrank/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "twistrank/heuristics.hpp"
#include "twistrank/lattice.hpp"
#include "twistrank/psi.hpp"
#include "twistrank/report.hpp"
#include "twistrank/series.hpp"
#include "twistrank/verify.hpp"

namespace twistrank::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

long long parse_ll(const std::string& tok, const char* field) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw ConfigError(std::string(field) + ": trailing characters");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError(std::string(field) + ": not an integer: '" + tok + "'");
  }
}

Curve make_curve_checked(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) parts.push_back(tok);
  if (parts.size() != 3) throw ConfigError("--curve: expected three integers a,b,c");
  long long a = parse_ll(parts[0], "--curve");
  long long b = parse_ll(parts[1], "--curve");
  long long c = parse_ll(parts[2], "--curve");
  try {
    return Curve(a, b, c);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("--curve: ") + e.what());
  }
}

std::optional<WindowX> parse_window_opt(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  try {
    return WindowX::parse(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--window: ") + e.what());
  }
}

Membership parse_membership(const std::string& spec) {
  if (spec == "strict_psi") return Membership::strict_psi;
  if (spec == "F_nonzero") return Membership::F_nonzero;
  throw ConfigError("--membership: expected strict_psi or F_nonzero");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("--output: cannot open '" + path + "'");
  f << text;
}

struct CommonFlags {
  std::string curve_spec;
  std::string output;
  std::string format = "json";
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& common, bool with_format = true) {
  cmd->add_option("--curve", common.curve_spec, "curve coefficients a,b,c of x^3+ax^2+bx+c")
      ->required();
  cmd->add_option("--output,-o", common.output, "write the report to a file instead of stdout");
  if (with_format)
    cmd->add_option("--format", common.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", common.threads,
                  "worker threads (default: TWISTRANK_THREADS or hardware)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("twistrank");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"series, lattices, and twist mining for families Dy^2 = x^3 + ax^2 + bx + c"};
  app.require_subcommand(1);

  // ---- sum ----
  auto* sum_cmd = app.add_subcommand("sum", "truncated series evaluation (S, R, or Q)");
  CommonFlags sum_common;
  std::string series = "S", window_spec, membership_spec = "strict_psi", route = "direct";
  double j = 1.0, k = 1.0;
  long long box = 0, BBound = 0;
  bool breakdown = false, want_t_bounds = false;
  add_common(sum_cmd, sum_common);
  sum_cmd->add_option("--series", series, "which series: S, R, or Q")
      ->check(CLI::IsMember({"S", "R", "Q"}));
  sum_cmd->add_option("--j", j, "height exponent j >= 0");
  sum_cmd->add_option("--k", k, "twist exponent k > 1/2");
  sum_cmd->add_option("--box,--N", box, "sup-norm box bound for S/R");
  sum_cmd->add_option("--B", BBound, "dd' bound for Q");
  sum_cmd->add_option("--window", window_spec, "open intervals lo..hi[,lo..hi...]; inf allowed");
  sum_cmd->add_option("--membership", membership_spec,
                      "Q membership test: strict_psi or F_nonzero");
  sum_cmd->add_option("--route", route, "R evaluation route: direct or lattice")
      ->check(CLI::IsMember({"direct", "lattice"}));
  sum_cmd->add_flag("--breakdown", breakdown, "include per-D (S/R) or per-t (Q) aggregates");
  sum_cmd->add_flag("--t-bounds", want_t_bounds,
                    "S only: include the [S, 4^j S] height-sum bracket");

  // ---- rank ----
  auto* rank_cmd = app.add_subcommand("rank", "twist-frequency mining over a box");
  CommonFlags rank_common;
  std::string rank_window_spec;
  long long rank_box = 100;
  std::size_t top = 0, witness_cap = 64;
  add_common(rank_cmd, rank_common, false);
  rank_cmd->add_option("--box,--N", rank_box, "sup-norm box bound");
  rank_cmd->add_option("--window", rank_window_spec, "restrict x = u/v to a window");
  rank_cmd->add_option("--top", top, "keep only the top entries by count (0 = all)");
  rank_cmd->add_option("--witness-cap", witness_cap, "witnesses retained per D");

  // ---- omega ----
  auto* omega_cmd = app.add_subcommand("omega", "roots of f mod d^2");
  CommonFlags omega_common;
  long long omega_d_arg = 1;
  add_common(omega_cmd, omega_common, false);
  omega_cmd->add_option("--d", omega_d_arg, "modulus root d")->required();

  // ---- reduce ----
  auto* reduce_cmd = app.add_subcommand("reduce", "shortest vectors of one twist lattice");
  CommonFlags reduce_common;
  long long r_alpha = 0, r_d = 1, r_dp = 1;
  double r_j = 1.0, r_k = 1.0;
  add_common(reduce_cmd, reduce_common, false);
  reduce_cmd->add_option("--alpha", r_alpha, "residue alpha in [0, d^2)")->required();
  reduce_cmd->add_option("--d", r_d, "d (alpha must be a root of f mod d^2)")->required();
  reduce_cmd->add_option("--dprime", r_dp, "d' (coprime to d)")->required();
  reduce_cmd->add_option("--j", r_j, "exponent for the reported term value");
  reduce_cmd->add_option("--k", r_k, "exponent for the reported term value");

  // ---- decompose ----
  auto* dec_cmd = app.add_subcommand("decompose", "unique triple for a pair and level t");
  CommonFlags dec_common;
  long long dec_u = 0, dec_v = 1, dec_t = 1;
  add_common(dec_cmd, dec_common, false);
  dec_cmd->add_option("--u", dec_u)->required();
  dec_cmd->add_option("--v", dec_v)->required();
  dec_cmd->add_option("--t", dec_t, "level with t^2 | F(u,v)")->required();

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand(
      "stats", "observed short-vector counts vs. the random annulus model");
  CommonFlags stats_common;
  long long stats_B = 32;
  double stats_C = 1.0;
  std::uint64_t stats_seed = 0;
  unsigned replicates = 32;
  double c1_override = 0.0, c2_override = 0.0, rank_hint = 0.0;
  std::string stats_filter;
  std::size_t hist_bins = 0;
  add_common(stats_cmd, stats_common);
  stats_cmd->add_option("--B", stats_B, "largest dd' bound (rows double up to here)");
  stats_cmd->add_option("--C", stats_C, "short-vector cut: count ||.|| <= C sqrt(dd')");
  stats_cmd->add_option("--seed", stats_seed, "model seed");
  stats_cmd->add_option("--replicates", replicates, "model replicates per row");
  stats_cmd->add_option("--C1", c1_override, "override the annulus inner constant");
  stats_cmd->add_option("--C2", c2_override, "override the annulus outer constant");
  stats_cmd->add_option("--rank-hint", rank_hint, "also report log^{r/2} B for this r");
  stats_cmd->add_option("--filter", stats_filter,
                        "membership filter for observed counts: strict_psi or F_nonzero");
  stats_cmd->add_option("--hist-bins", hist_bins,
                        "also emit a ||omega||/sqrt(dd') histogram with this many bins (json)");

  // ---- heuristic bound ----
  auto* hb_cmd = app.add_subcommand("bound", "heuristic upper-bound partial sums");
  std::string hb_output;
  double hb_j = 4.0, hb_k = 1.0, hb_c1 = 1.0;
  long long hb_T = 100000;
  hb_cmd->add_option("--j", hb_j);
  hb_cmd->add_option("--k", hb_k, "k > 1/2");
  hb_cmd->add_option("--C1", hb_c1, "annulus inner constant");
  hb_cmd->add_option("--T", hb_T, "series truncation");
  hb_cmd->add_option("--output,-o", hb_output);

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "run the full invariant suite");
  CommonFlags verify_common;
  VerifyScales scales;
  add_common(verify_cmd, verify_common, false);
  verify_cmd->add_option("--box", scales.series_box, "series/psi box scale");
  verify_cmd->add_option("--omega-dmax", scales.omega_dmax);
  verify_cmd->add_option("--lattice-B", scales.lattice_B);
  verify_cmd->add_option("--annulus-B", scales.annulus_B);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (sum_cmd->parsed()) {
      Curve curve = make_curve_checked(sum_common.curve_spec);
      if (!(j >= 0.0)) throw ConfigError("--j must be >= 0");
      if (!(k > 0.5)) throw ConfigError("--k must exceed 1/2");
      SumReport rep;
      if (series == "Q") {
        if (BBound < 1) throw ConfigError("--B must be >= 1 for the Q series");
        rep = q_partial(curve, j, k, BBound, parse_membership(membership_spec),
                        sum_common.threads, breakdown);
      } else {
        if (box < 1) throw ConfigError("--box must be >= 1 for the S/R series");
        SumParams params{j, k, box, parse_window_opt(window_spec)};
        if (series == "S")
          rep = s_partial(curve, params, sum_common.threads, breakdown);
        else if (route == "lattice")
          rep = r_via_lattices(curve, params, sum_common.threads, breakdown);
        else
          rep = r_partial(curve, params, sum_common.threads, breakdown);
      }
      if (sum_common.format == "csv") {
        emit(report::sum_report_csv(rep), sum_common.output, out);
      } else {
        auto jrep = report::to_json(rep);
        if (want_t_bounds && series == "S") {
          jrep["t_bounds"] = {{"low", rep.value}, {"high", std::pow(4.0, j) * rep.value}};
        }
        emit(jrep.dump(2), sum_common.output, out);
      }
      return kExitSuccess;
    }

    if (rank_cmd->parsed()) {
      Curve curve = make_curve_checked(rank_common.curve_spec);
      if (rank_box < 1) throw ConfigError("--box must be >= 1");
      auto window = parse_window_opt(rank_window_spec);
      auto hist = rank_mine(curve, rank_box, window ? &*window : nullptr, top, witness_cap,
                            rank_common.threads);
      emit(report::to_json(curve, hist).dump(2), rank_common.output, out);
      return kExitSuccess;
    }

    if (omega_cmd->parsed()) {
      Curve curve = make_curve_checked(omega_common.curve_spec);
      if (omega_d_arg < 1) throw ConfigError("--d must be >= 1");
      emit(report::to_json(curve, omega_d(curve, omega_d_arg)).dump(2), omega_common.output, out);
      return kExitSuccess;
    }

    if (reduce_cmd->parsed()) {
      Curve curve = make_curve_checked(reduce_common.curve_spec);
      auto rl = shortest_vectors(curve, TwistTriple{r_alpha, r_d, r_dp});
      emit(report::to_json(curve, rl, r_j, r_k).dump(2), reduce_common.output, out);
      return kExitSuccess;
    }

    if (dec_cmd->parsed()) {
      Curve curve = make_curve_checked(dec_common.curve_spec);
      auto triple = decompose_pair(curve, dec_u, dec_v, dec_t);
      emit(report::to_json(curve, triple, dec_u, dec_v, dec_t).dump(2), dec_common.output, out);
      return kExitSuccess;
    }

    if (stats_cmd->parsed()) {
      Curve curve = make_curve_checked(stats_common.curve_spec);
      if (stats_B < 2) throw ConfigError("--B must be >= 2");
      if (!(stats_C > 0)) throw ConfigError("--C must be positive");
      if (replicates < 1) throw ConfigError("--replicates must be >= 1");
      AnnulusModel model = default_annulus_model(curve, stats_seed);
      if (c1_override > 0) model.C1 = c1_override;
      if (c2_override > 0) model.C2 = c2_override;
      model.validate();
      std::optional<Membership> filter;
      if (!stats_filter.empty()) filter = parse_membership(stats_filter);
      std::optional<double> hint;
      if (rank_hint > 0) hint = rank_hint;

      std::vector<report::StatsRow> rows;
      for (long long B = 2; B <= stats_B; B *= 2) {
        auto obs = observed_short_count(curve, B, stats_C, filter, hint, stats_common.threads);
        double mean = 0.0, m2 = 0.0;
        for (unsigned rrep = 0; rrep < replicates; ++rrep) {
          AnnulusModel m = model;
          m.seed = model.seed + rrep;
          auto mc = random_annulus_count(curve, m, B, stats_C, hint, stats_common.threads);
          double x = static_cast<double>(mc.count);
          double delta = x - mean;
          mean += delta / static_cast<double>(rrep + 1);
          m2 += delta * (x - mean);
        }
        double stddev = replicates > 1 ? std::sqrt(m2 / (replicates - 1)) : 0.0;
        rows.push_back({B, stats_C, obs.count, mean, stddev, obs.log4_reference});
      }
      if (stats_common.format == "csv") {
        emit(report::stats_csv(rows), stats_common.output, out);
      } else {
        auto jrep = report::stats_to_json(curve, rows, stats_seed, replicates, model);
        if (hist_bins > 0)
          jrep["omega_ratio_histogram"] = report::to_json(
              omega_ratio_histogram(curve, stats_B, hist_bins, filter, stats_common.threads));
        emit(jrep.dump(2), stats_common.output, out);
      }
      return kExitSuccess;
    }

    if (hb_cmd->parsed()) {
      if (hb_T < 2) throw ConfigError("--T must be >= 2");
      if (!(hb_k > 0.5)) throw ConfigError("--k must exceed 1/2");
      if (!(hb_c1 > 0)) throw ConfigError("--C1 must be positive");
      emit(report::to_json(heuristic_bound_report(hb_j, hb_k, hb_c1, hb_T)).dump(2), hb_output,
           out);
      return kExitSuccess;
    }

    if (verify_cmd->parsed()) {
      Curve curve = make_curve_checked(verify_common.curve_spec);
      scales.psi_box = scales.series_box;
      scales.threads = verify_common.threads;
      auto checks = run_all_checks(curve, scales);
      report::json jc = report::json::array();
      for (const auto& c : checks)
        jc.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      report::json jrep;
      jrep["type"] = "verify";
      jrep["curve"] = {{"a", curve.a()}, {"b", curve.b()}, {"c", curve.c()}};
      jrep["all_pass"] = all_pass(checks);
      jrep["checks"] = jc;
      emit(jrep.dump(2), verify_common.output, out);
      return all_pass(checks) ? kExitSuccess : kExitDomainError;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  err << "config error: no subcommand\n";
  return kExitConfigError;
}

}  // namespace twistrank::cli
