// bsabr command line: price, effective-params, smile, simulate, calibrate,
// hw-compare. Configuration comes from a JSON file; tabular output is CSV
// with a versioned header comment, scalar output is JSON. Exit codes:
// 0 success, 2 configuration/schema error, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bsabr/black76.hpp"
#include "bsabr/calibration.hpp"
#include "bsabr/effective_medium.hpp"
#include "bsabr/effective_sabr.hpp"
#include "bsabr/hagan_vol.hpp"
#include "bsabr/hull_white.hpp"
#include "bsabr/mc_engine.hpp"
#include "bsabr/pricer.hpp"
#include "bsabr/types.hpp"

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- config access -------------------------------------------------------

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    f >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  return cfg;
}

const json& need(const json& j, const std::string& key, const std::string& ctx) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing config key \"" + ctx + key + "\"");
  return *it;
}

double need_num(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number()) throw ConfigError("\"" + ctx + key + "\" must be a number");
  return v.get<double>();
}

double opt_num(const json& j, const std::string& key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw ConfigError("\"" + key + "\" must be a number");
  return it->get<double>();
}

std::int64_t opt_int(const json& j, const std::string& key, std::int64_t fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError("\"" + key + "\" must be an integer");
  return it->get<std::int64_t>();
}

bool opt_bool(const json& j, const std::string& key, bool fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError("\"" + key + "\" must be a boolean");
  return it->get<bool>();
}

std::string need_str(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) throw ConfigError("\"" + ctx + key + "\" must be a string");
  return v.get<std::string>();
}

bsabr::SabrParams parse_model(const json& cfg) {
  const json& m = need(cfg, "model", "");
  bsabr::SabrParams p;
  p.alpha = need_num(m, "alpha", "model.");
  p.beta = opt_num(m, "beta", 1.0);
  p.rho = need_num(m, "rho", "model.");
  p.nu = need_num(m, "nu", "model.");
  p.shift = opt_num(m, "shift", 0.0);
  return p;
}

bsabr::AccrualPeriod parse_period(const json& cfg) {
  const json& j = need(cfg, "period", "");
  return {need_num(j, "tau0", "period."), need_num(j, "tau1", "period.")};
}

bsabr::DecayExponent parse_decay(const json& cfg) {
  const double q = need_num(cfg, "q", "");
  if (!(q > 0.0)) throw ConfigError("\"q\" must be > 0");
  return {q};
}

bsabr::CapletStyle parse_style(const std::string& s, const std::string& ctx) {
  if (s == "backward") return bsabr::CapletStyle::backward;
  if (s == "forward") return bsabr::CapletStyle::forward;
  throw ConfigError(ctx + ": unknown style \"" + s + "\" (backward|forward)");
}

struct Market {
  double forward_rate = 0.0;
  double discount = 1.0;
};

Market parse_market(const json& cfg) {
  const json& m = need(cfg, "market", "");
  return {need_num(m, "forward_rate", "market."), opt_num(m, "discount", 1.0)};
}

bsabr::McConfig parse_mc(const json& cfg) {
  bsabr::McConfig mc;
  const auto it = cfg.find("mc");
  if (it == cfg.end()) return mc;
  const json& m = *it;
  mc.n_paths = opt_int(m, "n_paths", mc.n_paths);
  mc.dt = opt_num(m, "dt", mc.dt);
  mc.seed = static_cast<std::uint64_t>(opt_int(m, "seed", static_cast<std::int64_t>(mc.seed)));
  if (m.contains("scheme")) {
    const std::string s = need_str(m, "scheme", "mc.");
    if (s == "log_euler")
      mc.scheme = bsabr::McScheme::log_euler_beta1;
    else if (s == "euler")
      mc.scheme = bsabr::McScheme::euler_full_truncation;
    else
      throw ConfigError("mc.scheme: unknown scheme \"" + s + "\" (log_euler|euler)");
  }
  mc.antithetic = opt_bool(m, "antithetic", mc.antithetic);
  mc.psi_midpoint = opt_bool(m, "psi_midpoint", mc.psi_midpoint);
  mc.n_dump_paths = static_cast<int>(opt_int(m, "dump_paths", mc.n_dump_paths));
  return mc;
}

std::vector<double> parse_strikes(const json& cfg, double forward_rate) {
  const auto it = cfg.find("strikes");
  if (it == cfg.end()) return bsabr::default_strike_grid(forward_rate);
  const json& s = *it;
  if (s.contains("grid")) {
    const json& g = s["grid"];
    if (!g.is_array() || g.empty()) throw ConfigError("strikes.grid must be a nonempty array");
    std::vector<double> out;
    for (const auto& v : g) {
      if (!v.is_number()) throw ConfigError("strikes.grid entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  return bsabr::default_strike_grid(forward_rate, static_cast<int>(opt_int(s, "n", 11)),
                                    opt_num(s, "lo_mult", 0.5), opt_num(s, "hi_mult", 2.0));
}

void require_valid(const bsabr::SabrParams& p, const bsabr::CapletSpec& spec) {
  const auto violations = bsabr::validate(p, spec);
  if (violations.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw ConfigError(msg);
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + out_path);
  f << content;
}

json effective_to_json(const bsabr::EffectiveSabrParams& e) {
  return json{{"alpha_hat", e.alpha_hat},
              {"rho_hat", e.rho_hat},
              {"nu_hat", e.nu_hat},
              {"time_to_exercise", e.time_to_exercise},
              {"degenerate", e.degenerate}};
}

// ---- quote CSV -----------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

std::vector<bsabr::Quote> read_quotes_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open quotes file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw ConfigError("quotes file is empty: " + path);
  if (strip(line) != "strike,style,quote_kind,value,weight")
    throw ConfigError("quotes file must start with header "
                      "\"strike,style,quote_kind,value,weight\"");
  std::vector<bsabr::Quote> quotes;
  int row = 0;
  while (std::getline(f, line)) {
    ++row;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    const auto fields = split_csv_line(s);
    if (fields.size() != 5)
      throw ConfigError("quote row " + std::to_string(row) + ": expected 5 fields, got "
                        + std::to_string(fields.size()));
    bsabr::Quote q;
    try {
      q.strike = std::stod(strip(fields[0]));
      q.value = std::stod(strip(fields[3]));
      q.weight = std::stod(strip(fields[4]));
    } catch (const std::exception&) {
      throw ConfigError("quote row " + std::to_string(row) + ": non-numeric field");
    }
    q.style = parse_style(strip(fields[1]), "quote row " + std::to_string(row));
    const std::string kind = strip(fields[2]);
    if (kind == "implied_vol")
      q.kind = bsabr::QuoteKind::implied_vol;
    else if (kind == "pv")
      q.kind = bsabr::QuoteKind::pv;
    else
      throw ConfigError("quote row " + std::to_string(row) + ": unknown quote_kind \"" + kind
                        + "\" (implied_vol|pv)");
    if (!(q.value > 0.0))
      throw ConfigError("quote row " + std::to_string(row) + ": value must be > 0");
    quotes.push_back(q);
  }
  if (quotes.empty()) throw ConfigError("quotes file has no data rows: " + path);
  return quotes;
}

// ---- subcommands ---------------------------------------------------------

int cmd_price(const json& cfg, const std::string& out_path) {
  const auto p = parse_model(cfg);
  const auto period = parse_period(cfg);
  const auto q = parse_decay(cfg);
  const auto mkt = parse_market(cfg);
  const json& c = need(cfg, "caplet", "");
  bsabr::CapletSpec spec;
  spec.strike = need_num(c, "strike", "caplet.");
  spec.style = parse_style(need_str(c, "style", "caplet."), "caplet.style");
  spec.period = period;
  spec.discount = mkt.discount;
  spec.forward_rate = mkt.forward_rate;
  require_valid(p, spec);

  const bsabr::CapletResult res = spec.style == bsabr::CapletStyle::backward
                                      ? bsabr::price_backward_caplet(spec, p, q)
                                      : bsabr::price_forward_caplet(spec, p);
  json out{{"command", "price"},
           {"style", spec.style == bsabr::CapletStyle::backward ? "backward" : "forward"},
           {"strike", spec.strike},
           {"q", q.q},
           {"present_value", res.present_value},
           {"time_to_exercise", res.time_to_exercise_quoted},
           {"implied_vol", nullptr},
           {"effective_params", nullptr}};
  if (res.implied_vol) out["implied_vol"] = *res.implied_vol;
  if (res.effective_params_used)
    out["effective_params"] = effective_to_json(*res.effective_params_used);
  write_output(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_effective_params(const json& cfg, const std::string& out_path) {
  const auto p = parse_model(cfg);
  const auto period = parse_period(cfg);
  const auto q = parse_decay(cfg);
  bsabr::CapletSpec probe;  // validation needs a full spec; strike plays no role here
  probe.strike = p.shift > 0.0 ? 0.0 : 1e-4;
  probe.forward_rate = probe.strike;
  probe.period = period;
  require_valid(p, probe);

  const auto closed = bsabr::effective_params(p, period, q);
  const auto inter = bsabr::effective_param_intermediates(p, period, q);
  const auto quad = bsabr::effective_medium::effective_params_quadrature(p, period, q);
  double max_rel_gap = 0.0;
  const auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
  };
  max_rel_gap = std::max({rel(closed.alpha_hat, quad.alpha_hat),
                          rel(closed.rho_hat, quad.rho_hat), rel(closed.nu_hat, quad.nu_hat)});

  json out{{"command", "effective-params"},
           {"q", q.q},
           {"closed_form", effective_to_json(closed)},
           {"intermediates",
            {{"tau", inter.tau}, {"gamma", inter.gamma}, {"H", inter.H}, {"zeta", inter.zeta}}},
           {"quadrature", effective_to_json(quad)},
           {"max_rel_gap", max_rel_gap}};
  write_output(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_smile(const json& cfg, const std::string& out_path, std::string curves_arg) {
  const auto p = parse_model(cfg);
  const auto period = parse_period(cfg);
  const auto q = parse_decay(cfg);
  const auto mkt = parse_market(cfg);
  const auto strikes = parse_strikes(cfg, mkt.forward_rate);
  const bool include_forward = opt_bool(cfg, "include_forward", false);

  std::vector<std::string> curves;
  if (curves_arg.empty() && cfg.contains("curves")) {
    for (const auto& c : cfg["curves"]) {
      if (!c.is_string()) throw ConfigError("\"curves\" entries must be strings");
      curves.push_back(c.get<std::string>());
    }
  } else if (!curves_arg.empty()) {
    std::istringstream ss(curves_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) curves.push_back(strip(tok));
  }
  if (curves.empty()) curves.push_back("effective");

  bsabr::CapletSpec probe;
  probe.strike = strikes.front();
  probe.period = period;
  probe.discount = mkt.discount;
  probe.forward_rate = mkt.forward_rate;
  require_valid(p, probe);

  const auto eff = bsabr::effective_params(p, period, q);
  std::ostringstream os;
  os << "# bsabr smile v1\n";
  os << "strike,style,pv,implied_vol,alpha_hat,rho_hat,nu_hat\n";
  for (const auto& curve : curves) {
    bsabr::SabrParams hat = p;  // backward pricing triple for this curve
    if (curve == "effective") {
      hat.alpha = eff.alpha_hat;
      hat.rho = eff.rho_hat;
      hat.nu = eff.nu_hat;
    } else if (curve == "alpha_only") {
      hat.alpha = eff.alpha_hat;
    } else if (curve == "unadjusted") {
      // plain (alpha, rho, nu) at tau1, i.e. no backward adjustment at all
    } else {
      throw ConfigError("unknown curve \"" + curve
                        + "\" (effective|alpha_only|unadjusted)");
    }
    for (const double k : strikes) {
      const double vol = bsabr::hagan_implied_vol(period.tau1, k, mkt.forward_rate, hat);
      const double pv =
          bsabr::sabr_caplet_price(period.tau1, k, mkt.forward_rate, hat, mkt.discount);
      os << fmt(k) << ",backward," << fmt(pv) << "," << fmt(vol) << "," << fmt(hat.alpha)
         << "," << fmt(hat.rho) << "," << fmt(hat.nu) << "\n";
    }
  }
  if (include_forward) {
    for (const double k : strikes) {
      bsabr::CapletSpec spec = probe;
      spec.strike = k;
      spec.style = bsabr::CapletStyle::forward;
      const auto res = bsabr::price_forward_caplet(spec, p);
      os << fmt(k) << ",forward," << fmt(res.present_value) << ",";
      if (res.implied_vol) os << fmt(*res.implied_vol);
      os << ",,,\n";
    }
  }
  write_output(out_path, os.str());
  return 0;
}

int cmd_simulate(const json& cfg, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<std::int64_t> paths_override) {
  const auto p = parse_model(cfg);
  const auto period = parse_period(cfg);
  const auto q = parse_decay(cfg);
  const auto mkt = parse_market(cfg);
  const auto strikes = parse_strikes(cfg, mkt.forward_rate);
  bsabr::McConfig mc = parse_mc(cfg);
  if (seed_override) mc.seed = *seed_override;
  if (paths_override) mc.n_paths = *paths_override;
  const bool include_forward = opt_bool(cfg, "include_forward", true) && period.tau0 > 0.0;

  bsabr::CapletSpec probe;
  probe.strike = strikes.front();
  probe.period = period;
  probe.discount = mkt.discount;
  probe.forward_rate = mkt.forward_rate;
  require_valid(p, probe);
  if (mc.n_dump_paths > 0 && (out_path.empty() || out_path == "-"))
    throw ConfigError("mc.dump_paths requires --out (the dump goes to <out>.paths.csv)");

  const auto paths = bsabr::simulate_paths(p, period, q, mkt.forward_rate, mc);
  const auto eff = bsabr::effective_params(p, period, q);
  bsabr::SabrParams hat = p;
  hat.alpha = eff.alpha_hat;
  hat.rho = eff.rho_hat;
  hat.nu = eff.nu_hat;

  std::ostringstream os;
  os << "# bsabr mc v1 seed=" << mc.seed << " paths=" << mc.n_paths << " dt=" << fmt(mc.dt)
     << "\n";
  os << "strike,style,mc_pv,mc_se,mc_implied_vol,analytic_vol,gap,ok\n";
  const auto emit = [&](bsabr::CapletStyle style) {
    const auto smile = bsabr::smile_from_paths(paths, strikes, style, p, period,
                                               mkt.forward_rate, mkt.discount, mc.antithetic);
    const bool backward = style == bsabr::CapletStyle::backward;
    double max_gap = 0.0;
    int n_inv = 0;
    bool all_ok = true;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
      const double analytic =
          backward ? bsabr::hagan_implied_vol(period.tau1, strikes[i], mkt.forward_rate, hat)
                   : bsabr::hagan_implied_vol(period.tau0, strikes[i], mkt.forward_rate, p);
      os << fmt(strikes[i]) << "," << (backward ? "backward" : "forward") << ","
         << fmt(smile.prices[i]) << "," << fmt(smile.std_errors[i]) << ",";
      if (smile.vol_ok[i]) {
        const double gap = smile.implied_vols[i] - analytic;
        const double band = 3.0 * smile.implied_vol_std_errors[i] + 0.003;
        os << fmt(smile.implied_vols[i]) << "," << fmt(analytic) << "," << fmt(gap) << ","
           << (std::abs(gap) <= band ? 1 : 0) << "\n";
        max_gap = std::max(max_gap, std::abs(gap));
        all_ok = all_ok && std::abs(gap) <= band;
        ++n_inv;
      } else {
        os << "," << fmt(analytic) << ",,0\n";
      }
    }
    os << "# style=" << (backward ? "backward" : "forward") << " n_invertible=" << n_inv
       << " max_abs_gap=" << fmt(max_gap) << " verdict="
       << (n_inv > 0 && all_ok ? "PASS" : "FAIL") << "\n";
  };
  emit(bsabr::CapletStyle::backward);
  if (include_forward) emit(bsabr::CapletStyle::forward);
  if (mc.scheme == bsabr::McScheme::euler_full_truncation)
    os << "# absorbed=" << paths.absorbed << "\n";
  write_output(out_path, os.str());

  if (mc.n_dump_paths > 0) {
    std::ostringstream ps;
    ps << "# bsabr paths v1 seed=" << mc.seed << "\n";
    ps << "path,t,r\n";
    for (std::size_t pi = 0; pi < paths.dumped.size(); ++pi)
      for (std::size_t ti = 0; ti < paths.dump_times.size(); ++ti)
        ps << pi << "," << fmt(paths.dump_times[ti]) << "," << fmt(paths.dumped[pi][ti])
           << "\n";
    write_output(out_path + ".paths.csv", ps.str());
  }
  return 0;
}

int cmd_calibrate(const json& cfg, const std::string& out_path, std::string quotes_path) {
  const auto period = parse_period(cfg);
  const auto mkt = parse_market(cfg);
  const json& cal = need(cfg, "calibration", "");
  const std::string mode = need_str(cal, "mode", "calibration.");
  if (quotes_path.empty() && cal.contains("quotes_csv"))
    quotes_path = need_str(cal, "quotes_csv", "calibration.");
  if (quotes_path.empty())
    throw ConfigError("calibrate needs a quote CSV (--quotes or calibration.quotes_csv)");
  const auto quotes = read_quotes_csv(quotes_path);

  json out{{"command", "calibrate"}, {"mode", mode}};
  bsabr::CalibrationResult res;
  std::vector<json> table;

  if (mode == "forward_smile") {
    const json& ij = need(cal, "initial", "calibration.");
    bsabr::SabrParams initial;
    initial.alpha = need_num(ij, "alpha", "calibration.initial.");
    initial.beta = opt_num(ij, "beta", 1.0);
    initial.rho = need_num(ij, "rho", "calibration.initial.");
    initial.nu = need_num(ij, "nu", "calibration.initial.");
    initial.shift = opt_num(ij, "shift", 0.0);
    bsabr::FitOptions opts;
    if (cal.contains("fit")) {
      const json& fj = cal["fit"];
      opts.fit_alpha = opt_bool(fj, "alpha", true);
      opts.fit_rho = opt_bool(fj, "rho", true);
      opts.fit_nu = opt_bool(fj, "nu", true);
    }
    bsabr::QuoteSet qs{quotes, period, mkt.forward_rate, mkt.discount};
    res = bsabr::calibrate_forward_smile(qs, initial, opts);
    for (const auto& e : quotes) {
      if (e.style != bsabr::CapletStyle::forward) continue;
      const double model =
          bsabr::hagan_implied_vol(period.tau0, e.strike, mkt.forward_rate, res.params);
      table.push_back(json{{"strike", e.strike},
                           {"style", "forward"},
                           {"quote_kind", e.kind == bsabr::QuoteKind::pv ? "pv" : "implied_vol"},
                           {"value", e.value},
                           {"weight", e.weight},
                           {"model_vol", model}});
    }
  } else if (mode == "q_to_atm_backward") {
    const auto p = parse_model(cfg);
    const bsabr::Quote* target = nullptr;
    for (const auto& e : quotes)
      if (e.style == bsabr::CapletStyle::backward) {
        if (target) throw ConfigError("q_to_atm_backward expects exactly one backward quote");
        target = &e;
      }
    if (!target) throw ConfigError("q_to_atm_backward expects one backward quote in the CSV");
    res = bsabr::calibrate_q_to_atm_backward(*target, p, period, mkt.forward_rate,
                                             mkt.discount);
    out["q"] = res.q;
    out["q_capped"] = res.q_capped;
    table.push_back(json{{"strike", target->strike},
                         {"style", "backward"},
                         {"quote_kind", target->kind == bsabr::QuoteKind::pv ? "pv"
                                                                             : "implied_vol"},
                         {"value", target->value},
                         {"weight", target->weight},
                         {"model_minus_quote_pv", res.residuals.empty() ? 0.0
                                                                        : res.residuals[0]}});
  } else {
    throw ConfigError("calibration.mode must be forward_smile or q_to_atm_backward");
  }

  out["params"] = json{{"alpha", res.params.alpha},
                       {"beta", res.params.beta},
                       {"rho", res.params.rho},
                       {"nu", res.params.nu},
                       {"shift", res.params.shift}};
  out["objective"] = res.objective;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  out["residuals"] = res.residuals;
  out["quotes"] = table;
  write_output(out_path, out.dump(2) + "\n");
  if (!res.converged) {
    std::cerr << "calibration did not converge (objective " << fmt(res.objective) << ")\n";
    return 3;
  }
  return 0;
}

int cmd_hw_compare(const json& cfg, const std::string& out_path) {
  const auto period = parse_period(cfg);
  const auto q = parse_decay(cfg);
  const json& hj = need(cfg, "hw", "");
  const double kappa = need_num(hj, "kappa", "hw.");
  const int grid_n = static_cast<int>(opt_int(hj, "grid_n", 101));
  if (grid_n < 2) throw ConfigError("hw.grid_n must be >= 2");
  if (!(period.tau1 > 0.0 && period.tau0 < period.tau1))
    throw ConfigError("hw-compare needs tau0 < tau1 and tau1 > 0");

  const double t_lo = std::max(period.tau0, 0.0);
  std::vector<double> grid(grid_n);
  for (int i = 0; i < grid_n; ++i)
    grid[i] = t_lo + (period.tau1 - t_lo) * i / (grid_n - 1);
  const auto report = bsabr::decay_shape_report(kappa, q, period, grid);

  std::ostringstream os;
  os << "# bsabr hw v1 kappa=" << fmt(kappa) << " q=" << fmt(q.q) << "\n";
  os << "t,psi,psi_tilde,gap\n";
  for (const auto& row : report.rows)
    os << fmt(row.t) << "," << fmt(row.psi_q) << "," << fmt(row.psi_hw) << ","
       << fmt(row.gap) << "\n";
  os << "# max_abs_gap=" << fmt(report.max_abs_gap) << "\n";
  os << "# fitted_q=" << fmt(bsabr::fit_decay_exponent(kappa, period)) << "\n";
  write_output(out_path, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"backward-looking SABR caplet toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path = "-", quotes_path, curves_arg;
  std::uint64_t seed = 0;
  std::int64_t n_paths = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
    return sub;
  };
  add_common(app.add_subcommand("price", "price one caplet (JSON report)"));
  add_common(app.add_subcommand(
      "effective-params", "closed-form effective SABR triple with quadrature cross-check"));
  auto* smile = add_common(
      app.add_subcommand("smile", "analytic caplet smile across a strike grid (CSV)"));
  smile->add_option("--curves", curves_arg,
                    "comma list of effective,alpha_only,unadjusted (default: effective)");
  auto* simulate =
      add_common(app.add_subcommand("simulate", "Monte-Carlo smile vs analytic vols (CSV)"));
  auto* seed_opt = simulate->add_option("--seed", seed, "override mc.seed");
  auto* paths_opt = simulate->add_option("--paths", n_paths, "override mc.n_paths");
  auto* calibrate = add_common(
      app.add_subcommand("calibrate", "fit (alpha, rho, nu) or q to quotes (JSON report)"));
  calibrate->add_option("--quotes", quotes_path, "quote CSV "
                        "(header strike,style,quote_kind,value,weight)");
  add_common(app.add_subcommand("hw-compare",
                                "power-law vs Hull-White-implied decay shape (CSV)"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const json cfg = load_config(config_path);
    if (app.got_subcommand("price")) return cmd_price(cfg, out_path);
    if (app.got_subcommand("effective-params")) return cmd_effective_params(cfg, out_path);
    if (app.got_subcommand("smile")) return cmd_smile(cfg, out_path, curves_arg);
    if (app.got_subcommand("simulate"))
      return cmd_simulate(cfg, out_path,
                          seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                          paths_opt->count() ? std::optional<std::int64_t>(n_paths)
                                             : std::nullopt);
    if (app.got_subcommand("calibrate")) return cmd_calibrate(cfg, out_path, quotes_path);
    if (app.got_subcommand("hw-compare")) return cmd_hw_compare(cfg, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bsabr::BracketError& e) {
    std::cerr << "numerical error: " << e.what() << " [attainable PV range "
              << fmt(e.attainable_lo) << " .. " << fmt(e.attainable_hi) << "]\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
