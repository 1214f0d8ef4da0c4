#include "fracmix/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "fracmix/analysis.hpp"
#include "fracmix/config.hpp"
#include "fracmix/error.hpp"
#include "fracmix/fraccalc.hpp"
#include "fracmix/fracode.hpp"
#include "fracmix/mlfunc.hpp"
#include "fracmix/pde1d.hpp"
#include "fracmix/verify_suite.hpp"

namespace fracmix::cli {

namespace {

using fraccalc::TimeGrid;
using detail::require;

constexpr double kPi = std::numbers::pi;

using Schema = std::vector<KeySpec>;

Schema operator+(Schema a, const Schema& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const Schema kOrderKeys = {{"alpha", std::nullopt}, {"q", "1"},     {"q_amp", "0"},
                           {"q_freq", "1"},         {"alpha2", "0.75"}, {"q2", "0"}};

const Schema kFieldKeys = {{"length", "pi"}, {"n_x", "200"},    {"a0", "1"},  {"a1", "0"},
                           {"nu", "auto"},   {"c", "0"},        {"c_amp", "0"}, {"u0", "parabola"},
                           {"u0_mode", "1"}};

// Every row is one record; cells are already formatted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<double> values) {
    std::vector<std::string> row;
    for (double v : values) row.push_back(format_real(v));
    rows.push_back(std::move(row));
  }
};

struct Report {
  std::vector<std::pair<std::string, std::string>> lines;

  void put(const std::string& key, const std::string& value) { lines.emplace_back(key, value); }
  void put(const std::string& key, double value) { put(key, format_real(value)); }
  void put(const std::string& key, std::size_t value) { put(key, std::to_string(value)); }
  void put(const std::string& key, bool value) { put(key, std::string(value ? "true" : "false")); }
};

struct ModeResult {
  Table table;
  Report report;
  std::size_t checks_failed = 0;
};

fraccalc::OrderSpec order_spec(const Resolved& r) {
  const double alpha = r.real("alpha");
  const double q = r.real("q");
  const double amp = r.real("q_amp");
  const double freq = r.real("q_freq");
  const double alpha2 = r.real("alpha2");
  const double q2 = r.real("q2");
  require(q >= 0.0 && amp >= 0.0 && q2 >= 0.0, "q, q_amp and q2 must be >= 0");
  require(amp <= q, "q_amp must not exceed q");
  fraccalc::OrderSpec spec;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  if (q > 0.0) {
    if (amp > 0.0)
      spec.terms.push_back({alpha, fraccalc::Coefficient::function([=](double t) { return q + amp * std::sin(freq * t); })});
    else
      spec.terms.push_back({alpha, fraccalc::Coefficient::constant(q)});
    lo = q - amp;
    hi = q + amp;
  } else {
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  }
  if (q2 > 0.0) {
    spec.terms.push_back({alpha2, fraccalc::Coefficient::constant(q2)});
    lo = std::min(lo, q2);
    hi = std::max(hi, q2);
  }
  spec.q_lower = spec.terms.empty() ? 0.0 : lo;
  spec.q_upper = spec.terms.empty() ? 0.0 : hi;
  spec.validate();
  return spec;
}

pde1d::MixedProblem field_problem(const Resolved& r) {
  const double length = r.real("length");
  require(length > 0.0, "length must be positive");
  const double a0 = r.real("a0");
  const double a1 = r.real("a1");
  const double a_min = std::min(a0, a0 + a1 * length);
  require(a_min > 0.0, "a(x) = a0 + a1 x must be positive on [0, length]");
  const double nu = r.text("nu") == "auto" ? a_min : r.real("nu");

  pde1d::MixedProblem p;
  p.op = pde1d::build_operator(length, r.count("n_x"), [=](double x) { return a0 + a1 * x; }, nu);
  p.spec = order_spec(r);

  const double c = r.real("c");
  const double c_amp = r.real("c_amp");
  p.c_nonpositive = c + std::abs(c_amp) <= 0.0;
  if (c_amp == 0.0)
    p.c = pde1d::Reaction::constant(c);
  else
    p.c = pde1d::Reaction::field([=](double x, double t) { return c + c_amp * std::sin(kPi * x / length) * std::cos(t); });

  const std::string& shape = r.text("u0");
  if (shape == "parabola") {
    p.u0 = p.op.sample([=](double x) { return x * (length - x); });
  } else if (shape == "sine") {
    p.u0 = p.op.sample([=](double x) { return std::sin(kPi * x / length); });
  } else if (shape == "mode") {
    const double k = static_cast<double>(r.count("u0_mode"));
    p.u0 = p.op.sample([=](double x) { return std::sin(k * kPi * x / length); });
  } else {
    throw ValidationError("u0 must be one of parabola, sine, mode; got '" + shape + "'");
  }
  return p;
}

std::vector<std::size_t> strided(std::size_t n_points, std::size_t every) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n_points; i += every) idx.push_back(i);
  if (idx.back() != n_points - 1) idx.push_back(n_points - 1);
  return idx;
}

ModeResult run_ml_eval(const Resolved& r) {
  mlfunc::MLParams p{r.real("alpha"), r.real("gamma"), r.real("series_radius"), r.real("tol")};
  p.validate();
  const double z0 = r.real("z_min"), z1 = r.real("z_max");
  const std::size_t n = r.count("n_points");
  require(z1 >= z0, "z_max must be >= z_min");
  ModeResult out;
  out.table.header = {"z", "value"};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = n == 1 ? z0 : z0 + (z1 - z0) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = mlfunc::mittag_leffler(p, z);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    out.table.add({z, v});
  }
  out.report.put("n_points", n);
  out.report.put("min_value", lo);
  out.report.put("max_value", hi);
  return out;
}

ModeResult run_ode(const Resolved& r) {
  fracode::FracOdeProblem p;
  p.spec = order_spec(r);
  p.lambda = r.real("lambda");
  p.v0 = r.real("v0");
  p.horizon = r.real("horizon");
  p.validate();
  const TimeGrid grid = TimeGrid::from_step(p.horizon, r.real("tau"));
  const auto idx = strided(grid.size(), r.count("output_every"));
  const std::string& method = r.text("method");

  ModeResult out;
  out.table.header = {"t", "v"};
  out.report.put("method", method);
  out.report.put("n_steps", grid.n_steps());
  std::vector<double> ts, vs;
  if (method == "l1") {
    const Trajectory traj = fracode::solve_l1(p, grid);
    for (std::size_t i : idx) {
      ts.push_back(grid[i]);
      vs.push_back(traj.value(i));
    }
  } else if (method == "spectral") {
    std::vector<double> pos;
    for (std::size_t i : idx)
      if (grid[i] > 0.0) pos.push_back(grid[i]);
    require(!pos.empty(), "spectral method needs a positive output time");
    const auto params = fracode::SpectralDensity::from_problem(p, pos.front());
    const Trajectory traj = fracode::solve_spectral(params, p.v0, pos);
    ts.push_back(0.0);
    vs.push_back(p.v0);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      ts.push_back(pos[i]);
      vs.push_back(traj.value(i));
    }
    out.report.put("split_point", params.delta);
    out.report.put("r_max", params.r_max);
  } else {
    throw ValidationError("method must be l1 or spectral; got '" + method + "'");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) out.table.add({ts[i], vs[i]});
  out.report.put("final_time", ts.back());
  out.report.put("final_value", vs.back());
  return out;
}

ModeResult run_pde(const Resolved& r) {
  pde1d::MixedProblem p = field_problem(r);
  p.horizon = r.real("horizon");
  const double f_amp = r.real("f_amp");
  if (f_amp != 0.0) {
    const double length = p.op.length;
    p.f = [=](double x, double t) { return f_amp * std::sin(kPi * x / length) * std::exp(-t); };
  }
  p.validate();
  const TimeGrid grid = TimeGrid::from_step(p.horizon, r.real("tau"));
  const auto idx = strided(grid.size(), r.count("output_every"));
  const std::string& method = r.text("method");

  ModeResult out;
  out.table.header = {"t", "norm"};
  out.report.put("method", method);
  out.report.put("n_steps", grid.n_steps());
  out.report.put("lambda1", p.op.eigenvalues(0));
  std::vector<double> ts, norms;
  if (method == "l1" || method == "picard") {
    Trajectory traj = Trajectory::scalar(std::vector<double>{0.0}, std::vector<double>{0.0});
    if (method == "l1") {
      traj = pde1d::solve_mixed_l1(p, grid);
    } else {
      auto res = pde1d::picard_solve(p, grid, r.count("max_iter"), r.real("picard_tol"));
      out.report.put("iterations", res.report.iterations);
      out.report.put("residual", res.report.residual);
      out.report.put("converged", res.report.converged);
      if (!res.report.factors.empty()) out.report.put("last_factor", res.report.factors.back());
      traj = std::move(res.solution);
    }
    for (std::size_t i : idx) {
      ts.push_back(grid[i]);
      norms.push_back(traj.norms()[i]);
    }
  } else if (method == "modal") {
    for (std::size_t i : idx) ts.push_back(grid[i]);
    norms = pde1d::modal_oracle(p, ts).norms();
  } else {
    throw ValidationError("method must be l1, picard or modal; got '" + method + "'");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) out.table.add({ts[i], norms[i]});
  out.report.put("final_time", ts.back());
  out.report.put("final_norm", norms.back());
  return out;
}

ModeResult run_decay(const Resolved& r) {
  pde1d::MixedProblem p = field_problem(r);
  p.decay_mode = true;
  const double t0 = r.real("t_min"), t1 = r.real("t_max");
  const std::size_t n = r.count("n_points");
  require(t0 > 0.0 && t1 > t0 && n >= 2, "need 0 < t_min < t_max and n_points >= 2");
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i)
    ts[i] = std::exp(std::log(t0) + (std::log(t1) - std::log(t0)) * static_cast<double>(i) / static_cast<double>(n - 1));
  ts.front() = t0;
  ts.back() = t1;
  p.horizon = t1;

  pde1d::DecayOptions opts;
  opts.stepper_tau = r.real("stepper_tau");
  opts.stepper_horizon_cap = r.real("stepper_cap");
  const auto run = pde1d::decay_run(p, ts, opts);
  const double fit_min = r.text("fit_min") == "auto" ? t0 : r.real("fit_min");
  const double fit_max = r.text("fit_max") == "auto" ? t1 : r.real("fit_max");
  const auto fit = analysis::fit_decay(ts, run.trajectory.norms(), fit_min, fit_max);

  ModeResult out;
  out.table.header = {"t", "norm", "ratio"};
  for (std::size_t i = 0; i < n; ++i) out.table.add({ts[i], run.trajectory.norms()[i], run.ratio[i]});
  out.report.put("route", run.route);
  out.report.put("lambda1", p.op.eigenvalues(0));
  out.report.put("predicted_slope", -run.alpha);
  out.report.put("fitted_slope", fit.slope);
  out.report.put("slope_error", std::abs(fit.slope + run.alpha));
  out.report.put("intercept", fit.intercept);
  out.report.put("rms_residual", fit.rms_residual);
  out.report.put("power_law", fit.power_law);
  out.report.put("fit_points", fit.n_points);
  out.report.put("fit_min", fit.t_min);
  out.report.put("fit_max", fit.t_max);
  return out;
}

ModeResult run_compare(const Resolved& r) {
  pde1d::MixedProblem p = field_problem(r);
  p.horizon = r.real("horizon");
  p.validate();
  const TimeGrid grid = TimeGrid::from_step(p.horizon, r.real("tau"));
  const double t_start = r.real("t_start");
  const double tol = r.real("tolerance");
  const Trajectory l1 = pde1d::solve_mixed_l1(p, grid);
  std::vector<std::size_t> idx;
  for (std::size_t i : strided(grid.size(), r.count("output_every")))
    if (grid[i] >= t_start) idx.push_back(i);
  require(!idx.empty(), "no output time at or after t_start");
  std::vector<double> ts;
  for (std::size_t i : idx) ts.push_back(grid[i]);
  const auto modal = pde1d::modal_oracle(p, ts).norms();

  ModeResult out;
  out.table.header = {"t", "norm_l1", "norm_modal", "rel_diff"};
  double worst = 0.0, worst_t = ts.front();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double a = l1.norms()[idx[k]], b = modal[k];
    const double rel = std::abs(a - b) / b;
    if (rel > worst) {
      worst = rel;
      worst_t = ts[k];
    }
    out.table.add({ts[k], a, b, rel});
  }
  const bool pass = worst <= tol;
  out.report.put("n_steps", grid.n_steps());
  out.report.put("max_rel_diff", worst);
  out.report.put("worst_time", worst_t);
  out.report.put("tolerance", tol);
  out.report.put("verdict", std::string(pass ? "pass" : "fail"));
  out.checks_failed = pass ? 0 : 1;
  return out;
}

ModeResult run_verify(const Resolved& r) {
  const long seed = r.integer("seed");
  require(seed >= 0, "seed must be >= 0");
  const auto results = run_verify_suite(static_cast<std::uint64_t>(seed), r.count("trials"));
  ModeResult out;
  out.table.header = {"check", "passed", "detail"};
  std::size_t passed = 0;
  for (const auto& c : results) {
    out.table.rows.push_back({c.name, c.passed ? "1" : "0", c.detail});
    passed += c.passed ? 1 : 0;
  }
  out.report.put("checks_total", results.size());
  out.report.put("checks_passed", passed);
  out.report.put("checks_failed", results.size() - passed);
  for (const auto& c : results) {
    out.report.put("check." + c.name, std::string(c.passed ? "pass" : "fail"));
    out.report.put("check." + c.name + ".detail", c.detail);
  }
  out.checks_failed = results.size() - passed;
  return out;
}

struct ModeDef {
  std::string name;
  Schema schema;
  ModeResult (*fn)(const Resolved&);
};

const std::vector<ModeDef>& mode_table() {
  static const std::vector<ModeDef> table = {
      {"ml-eval",
       {{"alpha", std::nullopt}, {"gamma", "1"}, {"z_min", "-10"}, {"z_max", "0"}, {"n_points", "101"},
        {"series_radius", "5"}, {"tol", "1e-12"}, {"seed", "0"}},
       run_ml_eval},
      {"ode",
       kOrderKeys + Schema{{"lambda", std::nullopt}, {"v0", "1"}, {"horizon", std::nullopt}, {"tau", "1/1024"},
                           {"method", "l1"}, {"output_every", "1"}, {"seed", "0"}},
       run_ode},
      {"pde",
       kOrderKeys + kFieldKeys +
           Schema{{"horizon", std::nullopt}, {"tau", "1/1024"}, {"method", "l1"}, {"output_every", "1"},
                  {"max_iter", "25"}, {"picard_tol", "1e-8"}, {"f_amp", "0"}, {"seed", "0"}},
       run_pde},
      {"decay",
       kOrderKeys + kFieldKeys +
           Schema{{"t_min", "100"}, {"t_max", "1e4"}, {"n_points", "30"}, {"fit_min", "auto"}, {"fit_max", "auto"},
                  {"stepper_tau", "1/16"}, {"stepper_cap", "200"}, {"seed", "0"}},
       run_decay},
      {"verify", {{"seed", "42"}, {"trials", "20"}}, run_verify},
      {"compare",
       kOrderKeys + kFieldKeys +
           Schema{{"horizon", "20"}, {"tau", "1/1024"}, {"t_start", "0.1"}, {"output_every", "64"},
                  {"tolerance", "1e-3"}, {"seed", "0"}},
       run_compare},
  };
  return table;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

RunOutcome execute(const std::string& mode, Config config, const std::string& out_dir,
                   std::optional<std::uint64_t> seed) {
  const auto& table = mode_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const ModeDef& d) { return d.name == mode; });
  if (it == table.end()) throw ValidationError("unknown mode '" + mode + "'");
  if (seed) config.set("seed", std::to_string(*seed));
  const Resolved resolved(config, it->schema, mode);

  ModeResult result = it->fn(resolved);

  std::ostringstream csv;
  csv << resolved.comment_line() << '\n';
  for (std::size_t i = 0; i < result.table.header.size(); ++i) csv << (i ? "," : "") << result.table.header[i];
  csv << '\n';
  for (const auto& row : result.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
    csv << '\n';
  }
  std::ostringstream rep;
  rep << "mode=" << mode << '\n';
  for (const auto& [k, v] : result.report.lines) rep << k << '=' << v << '\n';

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
  const std::filesystem::path dir(out_dir);
  RunOutcome outcome;
  outcome.csv_path = (dir / (mode + ".csv")).string();
  outcome.report_path = (dir / (mode + ".report.txt")).string();
  outcome.checks_failed = result.checks_failed;
  write_file(outcome.csv_path, csv.str());
  write_file(outcome.report_path, rep.str());
  return outcome;
}

}  // namespace

const std::vector<std::string>& modes() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : mode_table()) v.push_back(d.name);
    return v;
  }();
  return names;
}

RunOutcome run(const RunRequest& request) {
  return execute(request.mode, Config::load(request.config_path), request.out_dir, request.seed);
}

RunOutcome run_text(const std::string& mode, const std::string& config_text, const std::string& out_dir,
                    std::optional<std::uint64_t> seed) {
  return execute(mode, Config::parse(config_text), out_dir, seed);
}

}  // namespace fracmix::cli
