#include "dfc/cli.hpp"

#include "dfc/byparts.hpp"
#include "dfc/identities.hpp"
#include "dfc/variational.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

namespace dfc {

namespace {

const char *kOperatorHelp =
    "operator name {delta|nabla}-{left|right}-{sum|rl|caputo}. Left operators are anchored at --a "
    "(default: first input point), right ones at --b (default: last input point). For nabla-caputo "
    "the anchor is the window endpoint and the inner sum is anchored at a+n-1 or b-n+1";

void with_output(const std::string &path, std::ostream &out, const std::function<void(std::ostream &)> &write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file)
    throw ParseError("cannot write '" + path + "'");
  write(file);
  if (!file)
    throw ParseError("write to '" + path + "' failed");
}

Point point_arg(const std::optional<std::string> &text, const Point &fallback) {
  return text ? parse_rational(*text) : fallback;
}

template <typename T> int do_apply(const CliConfig &cfg, std::ostream &out) {
  const mpq_class alpha = parse_order(cfg.alpha, cfg.backend);
  const auto f = read_csv_file<T>(cfg.input);
  // Side and flavor only; the anchor is filled in below.
  const auto probe = parse_operator(cfg.op, alpha, Point(0));
  const bool left = probe.side == Side::left;
  Point anchor = left ? point_arg(cfg.a, f.grid().base()) : point_arg(cfg.b, f.grid().top());
  if (probe.flavor == Flavor::caputo && probe.direction == Direction::nabla)
    anchor = caputo_anchor(probe.side, anchor, alpha);
  const auto result = apply(parse_operator(cfg.op, alpha, anchor), f);
  with_output(cfg.output, out, [&](std::ostream &o) { write_csv(o, result); });
  return kExitOk;
}

int do_verify(const CliConfig &cfg, std::ostream &out) {
  SuiteOptions options;
  options.exact = cfg.backend == Backend::exact;
  options.params.p = cfg.p;
  if (cfg.tolerance)
    options.params.tolerance = *cfg.tolerance;
  if (!cfg.identities.empty()) {
    options.identities.clear();
    for (const auto &name : cfg.identities)
      options.identities.push_back(parse_identity(name));
  }
  const auto alphas = cfg.alpha.empty() ? default_alphas() : std::vector<mpq_class>{parse_order(cfg.alpha, cfg.backend)};
  std::vector<Grid> windows;
  if (cfg.a || cfg.b) {
    if (!(cfg.a && cfg.b))
      throw ParseError("--a and --b go together");
    windows.push_back(Grid::between(parse_rational(*cfg.a), parse_rational(*cfg.b)));
  } else {
    windows = default_windows();
  }
  const auto reports = run_suite(default_functions(cfg.seed), alphas, windows, options);
  with_output(cfg.output, out, [&](std::ostream &o) { o << to_json(reports).dump(2) << '\n'; });
  return all_pass(reports) ? kExitOk : kExitCheckFailed;
}

template <typename T> int do_sbp(const CliConfig &cfg, std::ostream &out) {
  const mpq_class alpha = parse_order(cfg.alpha, cfg.backend);
  const auto f = read_csv_file<T>(cfg.f);
  const auto g = read_csv_file<T>(cfg.g);
  SbpOptions options;
  options.reading = parse_reading(cfg.reading);
  options.shift_mutant = cfg.mutant;
  if (cfg.tolerance)
    options.tolerance = *cfg.tolerance;

  std::vector<SbpTheorem> theorems;
  for (const auto &name : cfg.theorems)
    theorems.push_back(parse_sbp_theorem(name));
  if (theorems.empty()) {
    if (options.reading == SbpReading::proof)
      theorems = {SbpTheorem::SBP_CAPUTO_RIGHT};
    else if (options.shift_mutant)
      theorems = {SbpTheorem::SBP_CAPUTO_RIGHT, SbpTheorem::SBP_RL_RIGHT};
    else
      theorems = all_sbp_theorems();
  }

  nlohmann::json arr = nlohmann::json::array();
  bool ok = true;
  for (auto th : theorems) {
    const auto r = sbp(th, f, g, alpha, options);
    ok = ok && r.pass;
    arr.push_back(to_json(r));
  }
  with_output(cfg.output, out, [&](std::ostream &o) { o << arr.dump(2) << '\n'; });
  return ok ? kExitOk : kExitCheckFailed;
}

nlohmann::json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

template <typename T> int do_el_solve(const CliConfig &cfg, std::ostream &out) {
  using tr = scalar_traits<T>;
  const auto p = parse_problem<T>(read_json_file(cfg.input));
  nlohmann::json report = {
      {"variant", p.variant == Variant::mm ? "mm" : "mmm"},
      {"alpha", format_rational(p.alpha)},
      {"a", format_rational(p.a())},
      {"b", format_rational(p.b())},
      {"backend", tr::name},
      {"lagrangian", p.lagrangian.name},
  };

  std::optional<GridFunction<T>> f;
  std::optional<T> mu;
  double tol = 1e-9;
  if (p.lagrangian.quadratic_g) {
    auto sol = solve_quadratic(p);
    f = sol.f;
    mu = sol.multiplier;
    report["method"] = "linear";
  } else if constexpr (!tr::exact) {
    const auto r = brute_force_minimize(p, GridFunction<double>::constant(p.window, 0.0));
    f = r.f;
    tol = 1e-6;
    report["method"] = "descent";
    report["iterations"] = r.iterations;
  } else {
    throw DomainError("exact backend solves quadratic lagrangians only; use --backend float");
  }
  if (cfg.tolerance)
    tol = *cfg.tolerance;

  auto stationarity = el_residual(p, *f);
  if (mu) {
    const auto c = constraint_gradient(p);
    for (std::size_t i = 0; i < stationarity.size(); ++i)
      stationarity[i] += *mu * c[i];
    report["multiplier"] = tr::to_string(*mu);
  }
  T worst(0);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < stationarity.size(); ++i) {
    worst = std::max<T>(worst, tr::abs(stationarity[i]));
    rows.push_back({{"t", format_rational(stationarity.grid().point(i))}, {"value", tr::to_string(stationarity[i])}});
  }
  const bool pass = tr::exact ? worst == 0 : tr::to_double(worst) <= tol;
  report["J"] = tr::to_string(functional_value(p, *f));
  report["residual"] = rows;
  report["max_residual"] = tr::to_string(worst);
  report["pass"] = pass;
  if (p.variant == Variant::mmm && p.boundary.kind == BoundaryKind::natural) {
    const auto [lo, hi] = natural_boundary_values(p, *f);
    report["natural_boundary"] = {tr::to_string(lo), tr::to_string(hi)};
  }

  with_output(cfg.output, out, [&](std::ostream &o) { write_csv(o, *f); });
  with_output(cfg.report, out, [&](std::ostream &o) { o << report.dump(2) << '\n'; });
  return pass ? kExitOk : kExitCheckFailed;
}

template <typename T> int dispatch(const CliConfig &cfg, std::ostream &out) {
  if (cfg.subcommand == "apply")
    return do_apply<T>(cfg, out);
  if (cfg.subcommand == "sbp")
    return do_sbp<T>(cfg, out);
  if (cfg.subcommand == "el-solve")
    return do_el_solve<T>(cfg, out);
  return do_verify(cfg, out);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int fail(std::ostream &err, const char *kind, const std::string &what, int code) {
  err << "dfc: error: " << kind << ": " << one_line(what) << '\n';
  return code;
}

} // namespace

mpq_class parse_order(const std::string &text, Backend backend) {
  try {
    return parse_rational(text);
  } catch (const ParseError &) {
    throw ParseError("alpha '" + text + "' is not a rational" +
                     (backend == Backend::exact ? " (exact backend)" : ""));
  }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CliConfig cfg;
  CLI::App app{"Discrete fractional sums and differences on shifted integer grids"};
  app.require_subcommand(1);

  const std::map<std::string, Backend> backends{{"exact", Backend::exact}, {"float", Backend::flt}};
  auto common = [&](CLI::App *sub) {
    sub->add_option("--backend", cfg.backend, "exact (rationals) or float")
        ->transform(CLI::CheckedTransformer(backends));
    sub->add_option("--output,-o", cfg.output, "output path, - for stdout");
    sub->add_option("--tolerance", cfg.tolerance, "float backend pass threshold");
  };

  auto *apply_cmd = app.add_subcommand("apply", "apply an operator to a CSV function (t,value)");
  apply_cmd->add_option("--op", cfg.op, kOperatorHelp)->required();
  apply_cmd->add_option("--alpha", cfg.alpha, "order, p/q or decimal")->required();
  apply_cmd->add_option("--a", cfg.a, "left anchor");
  apply_cmd->add_option("--b", cfg.b, "right anchor");
  apply_cmd->add_option("--input,-i", cfg.input, "input CSV")->required();
  common(apply_cmd);

  auto *verify_cmd = app.add_subcommand("verify", "run the identity suite, JSON report, exit 0 iff all pass");
  verify_cmd->add_option("--identity", cfg.identities, "identity id, repeatable (default: all)");
  verify_cmd->add_option("--alpha", cfg.alpha, "single order (default: 1/4 1/3 1/2 2/3 3/4 5/4 3/2)");
  verify_cmd->add_option("--a", cfg.a, "window start (with --b; default windows of length 4, 8, 16 from 0)");
  verify_cmd->add_option("--b", cfg.b, "window end");
  verify_cmd->add_option("--p", cfg.p, "integer order for INT_DUAL_N, COMM_LNG, COMM_RNG");
  verify_cmd->add_option("--seed", cfg.seed, "seed of the random-rational family");
  common(verify_cmd);

  auto *sbp_cmd = app.add_subcommand("sbp", "summation by parts on CSV functions f, g");
  sbp_cmd->add_option("--f", cfg.f, "CSV for f")->required();
  sbp_cmd->add_option("--g", cfg.g, "CSV for g")->required();
  sbp_cmd->add_option("--alpha", cfg.alpha, "order in (0,1)")->required();
  sbp_cmd->add_option("--theorem", cfg.theorems,
                      "SBP_CAPUTO_LEFT, SBP_RL_LEFT, SBP_CAPUTO_RIGHT, SBP_RL_RIGHT; repeatable (default: all)");
  sbp_cmd->add_option("--reading", cfg.reading, "literal, corrected or proof");
  sbp_cmd->add_flag("--mutant", cfg.mutant, "drop the +-1 shifts of the right theorems");
  common(sbp_cmd);

  auto *el_cmd = app.add_subcommand("el-solve", "solve a variational problem JSON, write solution CSV and report");
  el_cmd->add_option("--problem,--input,-i", cfg.input, "problem JSON")->required();
  el_cmd->add_option("--report", cfg.report, "residual report JSON, - for stdout (after the CSV)");
  common(el_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    return fail(err, "usage", e.what(), kExitUsage);
  }
  for (auto *sub : app.get_subcommands())
    cfg.subcommand = sub->get_name();

  try {
    return cfg.backend == Backend::exact ? dispatch<mpq_class>(cfg, out) : dispatch<double>(cfg, out);
  } catch (const ParseError &e) {
    return fail(err, "parse", e.what(), kExitUsage);
  } catch (const nlohmann::json::exception &e) {
    return fail(err, "parse", e.what(), kExitUsage);
  } catch (const NonConvergence &e) {
    return fail(err, "nonconvergence", e.what(), kExitCheckFailed);
  } catch (const DomainError &e) {
    return fail(err, "domain", e.what(), kExitUsage);
  } catch (const std::exception &e) {
    return fail(err, "internal", e.what(), kExitUsage);
  }
}

} // namespace dfc
