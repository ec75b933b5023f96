#include "entpert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "entpert/ci_oracle.hpp"
#include "entpert/degenpt.hpp"
#include "entpert/entangle.hpp"
#include "entpert/errors.hpp"

namespace entpert::cli {

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

struct ParsedSpec {
  std::string name;
  std::vector<std::string> args;
};

// "name", "name:a,b" and "name(a,b)" all parse to {name, {a, b}}.
ParsedSpec parse_spec(const std::string& spec) {
  ParsedSpec out;
  std::string args;
  if (const auto paren = spec.find('('); paren != std::string::npos) {
    if (spec.back() != ')') throw ConfigError("unbalanced parentheses in spec '" + spec + "'");
    out.name = spec.substr(0, paren);
    args = spec.substr(paren + 1, spec.size() - paren - 2);
  } else if (const auto colon = spec.find(':'); colon != std::string::npos) {
    out.name = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  } else {
    out.name = spec;
  }
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.args.push_back(item);
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (...) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> load_two_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file '" + path + "'");
  std::vector<double> xs, ys;
  double x, y;
  while (in >> x >> y) {
    xs.push_back(x);
    ys.push_back(y);
  }
  if (!in.eof()) throw ConfigError("malformed table file '" + path + "'");
  if (xs.size() < 3) throw ConfigError("table file '" + path + "' needs at least 3 rows");
  return {Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size()),
          Eigen::Map<Eigen::VectorXd>(ys.data(), ys.size())};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

std::string label_or(const std::optional<int>& v, const char* fallback = "-") {
  return v ? std::to_string(*v) : fallback;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& out) {
  for (const auto& w : warnings) out << "warning: " << w << "\n";
}

}  // namespace

std::unique_ptr<SpatialBasis> make_basis(const RunConfig& config) {
  const ParsedSpec spec = parse_spec(config.potential);
  if (spec.name == "harmonic") {
    const double omega = spec.args.empty() ? 1.0 : parse_number(spec.args[0], "omega");
    if (!(omega > 0)) throw ConfigError("potential harmonic: omega must be positive");
    const int max_mode = std::max({40, config.ci_n_max + 2, config.level_n + 2});
    return std::make_unique<HarmonicBasis>(omega, max_mode);
  }
  if (spec.name == "table") {
    if (spec.args.size() != 1) throw ConfigError("potential table: expected table:PATH");
    auto [xs, us] = load_two_column(spec.args[0]);
    const int n = static_cast<int>(xs.size());
    const double h = xs[1] - xs[0];
    if (!(h > 0)) throw ConfigError("potential table: x column must ascend");
    for (int i = 1; i + 1 < n; ++i)
      if (std::abs((xs[i + 1] - xs[i]) - h) > 1e-9 * h)
        throw ConfigError("potential table: x grid not uniform");
    if (config.k_max < 1) throw ConfigError("k_max must be positive");
    Grid1D grid{xs[0], xs[n - 1], n};
    return std::make_unique<NumericBasis>(solve_potential(grid, us, config.k_max));
  }
  throw ConfigError("unknown potential '" + config.potential +
                    "' (supported: harmonic:OMEGA, table:PATH)");
}

InteractionSpec make_interaction(const std::string& spec_string) {
  const ParsedSpec spec = parse_spec(spec_string);
  if (spec.name == "delta") return InteractionSpec::delta();
  if (spec.name == "harmonic") {
    const double omega = spec.args.empty() ? 1.0 : parse_number(spec.args[0], "omega");
    return InteractionSpec::harmonic(omega);
  }
  if (spec.name == "gaussian") {
    if (spec.args.size() != 2)
      throw ConfigError("interaction gaussian: expected gaussian:AMPLITUDE,WIDTH");
    return InteractionSpec::gaussian(parse_number(spec.args[0], "amplitude"),
                                     parse_number(spec.args[1], "width"));
  }
  if (spec.name == "table") {
    if (spec.args.size() != 1) throw ConfigError("interaction table: expected table:PATH");
    auto [us, vs] = load_two_column(spec.args[0]);
    try {
      return InteractionSpec::tabulated(std::move(us), std::move(vs));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown interaction '" + spec_string +
                    "' (supported: delta, harmonic:OMEGA, gaussian:A,S, table:PATH)");
}

//==============================================================================

int cmd_level(const RunConfig& config, std::ostream& out) {
  const auto basis = make_basis(config);
  const TwoBodyEngine engine(*basis, make_interaction(config.interaction));
  const DegenerateLevel level = enumerate_level(*basis, config.level_n);
  const HTilde ht = build_htilde(level, engine);
  const auto states = zeroth_order_states(ht, level, *basis);
  const LevelBounds bounds = level_bounds(level.n_quanta);

  out << "level N=" << level.n_quanta << "  m=" << level.degeneracy
      << "  E0=" << fmt12(level.unperturbed_energy) << "  [" << ht.provenance << "]\n";
  out << "H~ (per unit lambda):\n";
  for (int i = 0; i < level.degeneracy; ++i) {
    out << " ";
    for (int j = 0; j < level.degeneracy; ++j) out << " " << fmt12(ht.matrix(i, j));
    out << "\n";
  }
  out << "bounds: eps_L <= " << fmt12(bounds.bound_l) << "  eps_vN <= "
      << fmt12(bounds.bound_vn) << "\n";

  bool all_ok = true;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& st = states[k];
    const bool ok = st.eps_l <= bounds.bound_l + 1e-9 && st.eps_vn <= bounds.bound_vn + 1e-9;
    all_ok = all_ok && ok;
    out << "state " << k << ": shift=" << fmt12(st.energy_shift) << "  Sz=" << label_or(st.sz)
        << "  S=" << label_or(st.total_s) << "  P=" << label_or(st.parity)
        << "  eps_L=" << fmt12(st.eps_l) << "  eps_vN=" << fmt12(st.eps_vn)
        << (ok ? "" : "  BOUND-VIOLATION") << (st.residual_degenerate ? "  degenerate" : "")
        << "\n  coeffs:";
    for (int j = 0; j < st.coefficients.size(); ++j)
      out << " " << fmt12(st.coefficients[j]);
    out << "\n";
  }
  print_warnings(engine.warnings(), out);

  if (!config.csv_path.empty()) {
    auto csv = open_output(config.csv_path);
    csv << "state,energy_shift,sz,s,parity,eps_l,eps_vn,bound_l,bound_vn,bound_ok,"
           "residual_degenerate\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
      const auto& st = states[k];
      const bool ok = st.eps_l <= bounds.bound_l + 1e-9 && st.eps_vn <= bounds.bound_vn + 1e-9;
      csv << k << "," << fmt12(st.energy_shift) << "," << label_or(st.sz, "") << ","
          << label_or(st.total_s, "") << "," << label_or(st.parity, "") << ","
          << fmt12(st.eps_l) << "," << fmt12(st.eps_vn) << "," << fmt12(bounds.bound_l) << ","
          << fmt12(bounds.bound_vn) << "," << (ok ? 1 : 0) << ","
          << (st.residual_degenerate ? 1 : 0) << "\n";
    }
  }
  if (!config.json_path.empty()) {
    nlohmann::json j;
    j["n"] = level.n_quanta;
    j["m"] = level.degeneracy;
    j["unperturbed_energy"] = level.unperturbed_energy;
    j["provenance"] = ht.provenance;
    j["bounds"] = {{"eps_l", bounds.bound_l}, {"eps_vn", bounds.bound_vn}};
    auto& hj = j["htilde"] = nlohmann::json::array();
    for (int i = 0; i < level.degeneracy; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int jj = 0; jj < level.degeneracy; ++jj) row.push_back(ht.matrix(i, jj));
      hj.push_back(row);
    }
    auto& sj = j["states"] = nlohmann::json::array();
    for (const auto& st : states) {
      nlohmann::json s;
      s["energy_shift"] = st.energy_shift;
      if (st.sz) s["sz"] = *st.sz;
      if (st.total_s) s["s"] = *st.total_s;
      if (st.parity) s["parity"] = *st.parity;
      s["eps_l"] = st.eps_l;
      s["eps_vn"] = st.eps_vn;
      s["residual_degenerate"] = st.residual_degenerate;
      s["coefficients"] = std::vector<double>(
          st.coefficients.data(), st.coefficients.data() + st.coefficients.size());
      sj.push_back(s);
    }
    auto jf = open_output(config.json_path);
    jf << j.dump(2) << "\n";
  }
  return all_ok ? 0 : 1;
}

int cmd_bounds(const RunConfig& config, std::ostream& out) {
  if (config.bounds_n_min < 0 || config.bounds_n_max < config.bounds_n_min)
    throw ConfigError("bounds: need 0 <= n-min <= n-max");
  std::ostringstream csv;
  csv << "n,bound_l,bound_vn\n";
  for (int n = config.bounds_n_min; n <= config.bounds_n_max; ++n) {
    const LevelBounds b = level_bounds(n);
    csv << n << "," << fmt12(b.bound_l) << "," << fmt12(b.bound_vn) << "\n";
  }
  if (config.csv_path.empty()) {
    out << csv.str();
  } else {
    open_output(config.csv_path) << csv.str();
    out << "wrote " << config.bounds_n_max - config.bounds_n_min + 1 << " rows to "
        << config.csv_path << "\n";
  }
  return 0;
}

int cmd_rcurve(const RunConfig& config, std::ostream& out) {
  if (config.r_steps < 1) throw ConfigError("rcurve: steps must be positive");
  if (!(config.r_max > config.r_min)) throw ConfigError("rcurve: need r-min < r-max");

  std::vector<std::pair<double, bool>> rs;  // (r, moshinsky flag)
  for (int i = 0; i <= config.r_steps; ++i)
    rs.emplace_back(
        config.r_min + (config.r_max - config.r_min) * i / config.r_steps, false);
  rs.emplace_back(1.0 / std::sqrt(2.0), true);  // the Moshinsky star
  std::stable_sort(rs.begin(), rs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::ostringstream csv;
  csv << "r,eps_l,eps_vn,moshinsky\n";
  for (const auto& [r, star] : rs) {
    const auto [el, evn] = entanglement_of_r(r);
    csv << fmt12(r) << "," << fmt12(el) << "," << fmt12(evn) << "," << (star ? 1 : 0) << "\n";
  }
  if (config.csv_path.empty()) {
    out << csv.str();
  } else {
    open_output(config.csv_path) << csv.str();
    out << "wrote " << rs.size() << " rows to " << config.csv_path << "\n";
  }
  return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  const auto basis = make_basis(config);
  const TwoBodyEngine engine(*basis, make_interaction(config.interaction));
  const SweepResult sweep = lambda_sweep(engine, config.level_n, config.lambdas, config.ci_n_max);
  const auto fits = extrapolate(sweep);
  const int m = sweep.level.degeneracy;

  std::ostringstream csv;
  csv << "lambda,state_index,energy,eps_l,eps_vn,overlap_max\n";
  for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
    for (int k = 0; k < m; ++k) {
      const auto& rec = sweep.records[i][k];
      csv << fmt12(sweep.lambdas[i]) << "," << k << "," << fmt12(rec.energy) << ","
          << fmt12(rec.eps_l) << "," << fmt12(rec.eps_vn) << "," << fmt12(rec.overlap_max)
          << "\n";
    }

  std::ostringstream extrap;
  extrap << "state_index,intercept_eps_l,slope_eps_l,intercept_eps_vn,slope_eps_vn,"
            "pred_eps_l,pred_eps_vn,abs_err_l,abs_err_vn,poor_fit\n";
  bool converged = true;
  constexpr double kConvergenceTol = 1e-3;
  for (int k = 0; k < m; ++k) {
    const auto& f = fits[k];
    const auto& pred = sweep.predictions[k];
    const double err_l = std::abs(f.intercept_l - pred.eps_l);
    const double err_vn = std::abs(f.intercept_vn - pred.eps_vn);
    converged = converged && err_l <= kConvergenceTol && err_vn <= kConvergenceTol;
    extrap << k << "," << fmt12(f.intercept_l) << "," << fmt12(f.slope_l) << ","
           << fmt12(f.intercept_vn) << "," << fmt12(f.slope_vn) << "," << fmt12(pred.eps_l)
           << "," << fmt12(pred.eps_vn) << "," << fmt12(err_l) << "," << fmt12(err_vn) << ","
           << ((f.poor_fit_l || f.poor_fit_vn) ? 1 : 0) << "\n";
  }

  if (config.csv_path.empty()) {
    out << csv.str() << "\n# extrapolation (fit over the three smallest lambdas)\n"
        << extrap.str();
  } else {
    open_output(config.csv_path) << csv.str();
    std::string extrap_path = config.csv_path;
    const auto dot = extrap_path.rfind('.');
    extrap_path.insert(dot == std::string::npos ? extrap_path.size() : dot, "_extrapolation");
    open_output(extrap_path) << extrap.str();
    out << "wrote " << config.csv_path << " and " << extrap_path << "\n";
  }
  print_warnings(sweep.warnings, out);
  print_warnings(engine.warnings(), out);
  out << (converged ? "converged: extrapolated intercepts match the zeroth-order "
                      "predictions within 1e-3\n"
                    : "NOT CONVERGED: extrapolated intercepts deviate from the "
                      "zeroth-order predictions beyond 1e-3\n");
  return converged ? 0 : 1;
}

}  // namespace entpert::cli
