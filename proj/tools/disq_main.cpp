// Copyright 2026 The disq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// disq command-line tool. Exit codes: 0 ok, 2 bad flags or parameters,
// 3 a verification failed.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "disq/commchan.hpp"
#include "disq/report.hpp"
#include "disq/repeater.hpp"
#include "disq/scheme1.hpp"
#include "disq/swap.hpp"
#include "disq/werner.hpp"

namespace {

using disq::report::Json;

constexpr int kExitOk = 0;
constexpr int kExitFlags = 2;
constexpr int kExitVerification = 3;

struct Common {
  std::string out;
  std::uint64_t seed = 1;
  std::string format = "json";
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::invalid_argument("cannot write " + c.out);
  f << text;
}

int emit_json(const Common& c, const Json& doc, bool ok) {
  emit(c, doc.dump(2) + "\n");
  return ok ? kExitOk : kExitVerification;
}

void add_common(CLI::App* cmd, Common& c, bool allow_csv) {
  cmd->add_option("--out", c.out, "Output file (default stdout)");
  cmd->add_option("--seed", c.seed, "Seed for randomized checks")->capture_default_str();
  auto* fmt = cmd->add_option("--format", c.format, "Output format")->capture_default_str();
  if (allow_csv) fmt->check(CLI::IsMember({"csv", "json"}));
  else fmt->check(CLI::IsMember({"json"}));
}

// scheme1-scan ---------------------------------------------------------------

struct ScanFlags {
  Common common;
  std::string config;
  std::string variant = "no_comm";
  bool twirled = false;
  disq::scheme1::Params p;
  std::string sweep;
  std::vector<double> values;
};

int run_scan(ScanFlags& f) {
  using namespace disq;
  report::ScanConfig cfg;
  if (!f.config.empty()) {
    cfg = report::read_scan_config(f.config);
  } else {
    cfg.name = "command-line";
    cfg.base = f.p;
    cfg.base.variant = f.variant == "locc" ? scheme1::Variant::kLocc : scheme1::Variant::kNoComm;
    cfg.base.twirled = f.twirled;
    cfg.parameter = f.sweep;
    cfg.values = f.values;
    if (!f.sweep.empty() && f.values.empty()) throw std::invalid_argument("--sweep needs --values");
  }
  auto grid = cfg.grid();
  for (const auto& g : grid) g.validate();
  report::ScanTable table{report::make_manifest("scheme1-scan", report::to_json(cfg), f.common.seed),
                          scheme1::scan(grid)};
  if (f.common.format == "csv") {
    std::ostringstream os;
    report::write_scan_csv(os, table);
    emit(f.common, os.str());
  } else {
    emit(f.common, report::to_json(table).dump(2) + "\n");
  }
  return kExitOk;
}

// werner-verify --------------------------------------------------------------

struct WernerFlags {
  Common common;
  double f = 0.96;
  double gamma = 1.0;
  double eps = 0.05;
  int m = 50;
  double delta = 1.4;
  int samples = 5;
};

int run_werner(const WernerFlags& w) {
  using namespace disq;
  Json params{{"f", w.f}, {"gamma", w.gamma}, {"eps", w.eps}, {"m", w.m}, {"delta", w.delta}, {"samples", w.samples}};
  bool ok = true;

  const auto formula = werner::four_to_one(w.f);
  const auto sim = werner::simulate_four_to_one(w.f);
  const double diff = std::max(std::abs(formula.f_out - sim.f_out), std::abs(formula.p_succ - sim.p_succ));
  const bool four_ok = diff <= 1e-10;
  ok &= four_ok;

  const double fix1 = werner::four_to_one(1.0).f_out;
  const double fix_quarter = werner::four_to_one(0.25).f_out;
  const bool fixed_ok = std::abs(fix1 - 1.0) <= 1e-15 && std::abs(fix_quarter - 0.25) <= 1e-15;
  ok &= fixed_ok;

  // Boosted steady state against the rate-weighted fixed point.
  const auto boosted = werner::pair_equation(w.f, w.m * w.delta, w.eps);
  const double f_ss = fidelity_with_omega(steady_state(boosted).state);
  const double f_boost = werner::boost_steady_fidelity(w.f, w.m, w.delta, w.eps);
  const bool boost_ok = std::abs(f_ss - f_boost) <= 1e-8;
  ok &= boost_ok;

  // Closed-form propagator against integration from random product states.
  std::mt19937_64 rng(w.common.seed);
  const auto me = werner::pair_equation(w.f, w.gamma, w.eps);
  const SystemLayout one = SystemLayout::qubits({"q"});
  double worst = 0.0;
  for (int s = 0; s < w.samples; ++s) {
    Matrix rho = kron(random_state(one, rng).data(), random_state(one, rng).data());
    DensityMatrix rho0(me.layout(), rho);
    EvolveOptions opts;
    opts.sample_times = {0.25, 0.5, 1.0, 2.0, 4.0};
    opts.step.rtol = 1e-12;
    opts.step.atol = 1e-14;
    auto traj = evolve(me, rho0, 4.0, opts);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      worst = std::max(worst, trace_distance(traj.states[i],
                                             werner::exact_evolve(rho0, w.f, w.gamma, w.eps, traj.times[i])));
  }
  const bool exact_ok = worst <= 1e-8;
  ok &= exact_ok;

  Json result{
      {"four_to_one",
       {{"f_out", formula.f_out}, {"p_succ", formula.p_succ}, {"sim_f_out", sim.f_out},
        {"sim_p_succ", sim.p_succ}, {"max_diff", diff}, {"ok", four_ok}}},
      {"fixed_points", {{"f_out_at_1", fix1}, {"f_out_at_quarter", fix_quarter}, {"ok", fixed_ok}}},
      {"nested", {{"levels_2_f_out", werner::nested_distill(w.f, 2)}, {"levels_2_p_succ", werner::nested_success(w.f, 2)}}},
      {"boost", {{"steady_state", f_ss}, {"formula", f_boost}, {"ok", boost_ok}}},
      {"exact_solution", {{"samples", w.samples}, {"max_trace_distance", worst}, {"ok", exact_ok}}},
      {"all_ok", ok}};
  return emit_json(w.common, report::document(report::make_manifest("werner-verify", params, w.common.seed), result), ok);
}

// swap-verify ----------------------------------------------------------------

struct SwapFlags {
  Common common;
  double f = 0.96;
  double gamma = 70.0;
  double eps = 0.05;
  double delta = 1.4;
  bool skip_simulation = false;
};

int run_swap(const SwapFlags& s) {
  using namespace disq;
  swap::Params p{s.f, s.gamma, s.eps, s.delta};
  p.validate();
  Json params{{"f", s.f}, {"gamma", s.gamma}, {"eps", s.eps}, {"delta", s.delta}};
  const double q = swap::quadrature_fidelity(p);
  const double c = swap::closed_form_fidelity(p);
  const bool qc_ok = std::abs(q - c) <= 1e-10;
  bool ok = qc_ok;

  const double poly = swap::swap_output_fidelity(s.f);
  Matrix sources = kron(werner_state(s.f).data(), werner_state(s.f).data());
  const double oracle = swap::bell_measurement_fidelity(sources);
  const bool poly_ok = std::abs(poly - oracle) <= 1e-12;
  ok &= poly_ok;

  Json result{{"quadrature", q}, {"closed_form", c}, {"quadrature_vs_closed_form_ok", qc_ok},
              {"swap_polynomial", poly}, {"bell_measurement_oracle", oracle}, {"polynomial_ok", poly_ok}};
  if (!s.skip_simulation) {
    const double sim = swap::simulate_continuous_swap(p);
    const bool sim_ok = std::abs(sim - q) <= 1e-6;
    ok &= sim_ok;
    result["simulation"] = sim;
    result["simulation_ok"] = sim_ok;
  }
  result["all_ok"] = ok;
  return emit_json(s.common, report::document(report::make_manifest("swap-verify", params, s.common.seed), result), ok);
}

// commchan-verify ------------------------------------------------------------

struct CommchanFlags {
  Common common;
  std::vector<double> gammas{100.0, 316.22776601683796, 1000.0, 3162.2776601683795, 10000.0};
  double gamma = 0.5;
  double delta = 0.5;
  std::string map = "conditional-pauli";
  std::string extraction = "richardson";
  std::vector<double> bound_alphas{1e-3, 1e-2};
};

int run_commchan(const CommchanFlags& c) {
  using namespace disq;
  Json params{{"Gamma_list", c.gammas}, {"gamma", c.gamma},           {"delta", c.delta},
              {"map", c.map},           {"extraction", c.extraction}, {"bound_alphas", c.bound_alphas}};
  bool ok = true;

  Json occupations = Json::array();
  for (double G : c.gammas) {
    auto ss = commchan::occupation_steady(c.delta, G);
    auto ode = commchan::evolve_occupation({}, c.delta, G, 60.0 / c.delta);
    auto a = ss.as_array(), b = ode.as_array();
    double diff = 0.0;
    for (int i = 0; i < 5; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    const bool occ_ok = diff <= 1e-10;
    ok &= occ_ok;
    occupations.push_back(Json{{"Gamma", G}, {"p_0000", ss.p0000}, {"max_ode_diff", diff}, {"ok", occ_ok}});
  }

  Json bounds = Json::array();
  for (double alpha : c.bound_alphas) {
    auto b = commchan::verify_bounds(c.delta, c.delta / alpha, 10.0 / c.delta);
    ok &= b.all_hold;
    bounds.push_back(report::to_json(b));
  }

  commchan::OneRoundLocc t;
  if (c.map == "conditional-pauli") {
    t = commchan::conditional_pauli();
  } else {
    Matrix u(2, 2), v(2, 2);
    u << 1, 0, 0, cplx(0, 1);
    v << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
    t = commchan::local_unitary_pair(u, v);
  }
  auto mode = c.extraction == "exact" ? commchan::GeneratorExtraction::kExact
                                      : commchan::GeneratorExtraction::kRichardson;
  auto err = commchan::effective_locc_error(t, c.gamma, c.delta, c.gammas, mode);
  const bool scaling_ok = err.points.size() < 2 || (err.monotone && err.slope >= 0.5);
  ok &= scaling_ok;

  Json result{{"occupation_steady", occupations}, {"bounds", bounds},
              {"effective_generator", report::to_json(err)}, {"scaling_ok", scaling_ok}, {"all_ok", ok}};
  return emit_json(c.common, report::document(report::make_manifest("commchan-verify", params, c.common.seed), result), ok);
}

// repeater-plan --------------------------------------------------------------

struct RepeaterFlags {
  Common common;
  double f = 0.96;
  double eps = 0.05;
  double gamma = 70.0;
  int m = 50;
  int n = 16;
  int k = 1;
  bool search = false;
  int m_max = 4096;
};

int run_repeater(const RepeaterFlags& r) {
  using namespace disq;
  Json params{{"f", r.f}, {"eps", r.eps}, {"gamma", r.gamma}, {"m", r.m},
              {"n", r.n}, {"k", r.k},     {"search", r.search}, {"m_max", r.m_max}};
  auto cfg = repeater::RepeaterConfig::tied(r.f, r.eps, r.gamma, r.m, r.n, r.k);
  Json result = report::plan_json(cfg, repeater::run(cfg));
  // The single-level closure test is reported even for k = 0.
  result["level_closes"] = repeater::closes(r.f, cfg);
  bool ok = result["sustains_f_I"].get<bool>() && result["level_closes"].get<bool>();
  if (r.search) {
    repeater::SearchSpace space;
    space.gamma = r.gamma;
    space.m_max = r.m_max;
    try {
      auto best = repeater::plan_search(r.f, r.eps, space);
      result["search"] = Json{{"feasible", true},
                              {"config", report::to_json(best)},
                              {"exponent", repeater::scaling_exponent(best.m, best.n)}};
    } catch (const repeater::InfeasibleTarget& e) {
      result["search"] = Json{{"feasible", false}, {"reason", e.what()}};
      ok = false;
    }
  }
  return emit_json(r.common, report::document(report::make_manifest("repeater-plan", params, r.common.seed), result), ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative distillation and continuous repeater toolkit"};
  app.require_subcommand(1);

  ScanFlags scan;
  auto* s = app.add_subcommand("scheme1-scan", "Steady-state observables of the two-pair scheme over a grid");
  add_common(s, scan.common, true);
  scan.common.format = "csv";
  s->add_option("--config", scan.config, "Scan configuration file (JSON)")->check(CLI::ExistingFile);
  s->add_option("--variant", scan.variant)->check(CLI::IsMember({"no_comm", "locc"}))->capture_default_str();
  s->add_flag("--twirled", scan.twirled, "Twirl the target before the flip (locc only)");
  s->add_option("--r", scan.p.r)->capture_default_str();
  s->add_option("--gamma", scan.p.gamma)->capture_default_str();
  s->add_option("--delta-f", scan.p.delta_f)->capture_default_str();
  s->add_option("--eps-c", scan.p.eps_c)->capture_default_str();
  s->add_option("--eps-h", scan.p.eps_h)->capture_default_str();
  s->add_option("--eps-d", scan.p.eps_d)->capture_default_str();
  s->add_option("--sweep", scan.sweep, "Parameter to sweep")
      ->check(CLI::IsMember({"r", "gamma", "delta_f", "eps_c", "eps_h", "eps_d", "eps_n"}));
  s->add_option("--values", scan.values, "Sweep values")->delimiter(',');

  WernerFlags wf;
  auto* w = app.add_subcommand("werner-verify", "Check Werner pumping, 4-to-1 and boost formulas");
  add_common(w, wf.common, false);
  w->add_option("--f", wf.f)->capture_default_str();
  w->add_option("--gamma", wf.gamma, "Entangler rate for the propagator check")->capture_default_str();
  w->add_option("--eps", wf.eps)->capture_default_str();
  w->add_option("--m", wf.m, "Boost multiplicity")->capture_default_str();
  w->add_option("--delta", wf.delta, "Per-copy boost rate")->capture_default_str();
  w->add_option("--samples", wf.samples)->check(CLI::Range(0, 1000))->capture_default_str();

  SwapFlags sf;
  auto* sw = app.add_subcommand("swap-verify", "Compare swap fidelity by quadrature, closed form and simulation");
  add_common(sw, sf.common, false);
  sw->add_option("--f", sf.f)->capture_default_str();
  sw->add_option("--gamma", sf.gamma)->capture_default_str();
  sw->add_option("--eps", sf.eps)->capture_default_str();
  sw->add_option("--delta", sf.delta, "Swap rate")->capture_default_str();
  sw->add_flag("--skip-simulation", sf.skip_simulation);

  CommchanFlags cf;
  auto* cc = app.add_subcommand("commchan-verify", "Occupations, bounds and effective LOCC generator");
  add_common(cc, cf.common, false);
  cc->add_option("--Gamma-list", cf.gammas, "Communication rates")->delimiter(',')->capture_default_str();
  cc->add_option("--gamma", cf.gamma)->capture_default_str();
  cc->add_option("--delta", cf.delta)->capture_default_str();
  cc->add_option("--map", cf.map)->check(CLI::IsMember({"conditional-pauli", "unitary-pair"}))->capture_default_str();
  cc->add_option("--extraction", cf.extraction)->check(CLI::IsMember({"richardson", "exact"}))->capture_default_str();
  cc->add_option("--bound-alphas", cf.bound_alphas)->delimiter(',')->capture_default_str();

  RepeaterFlags rf;
  auto* rp = app.add_subcommand("repeater-plan", "Level recursion, resources and parameter search");
  add_common(rp, rf.common, false);
  rp->add_option("--f", rf.f)->capture_default_str();
  rp->add_option("--eps", rf.eps)->capture_default_str();
  rp->add_option("--gamma", rf.gamma)->capture_default_str();
  rp->add_option("--m", rf.m)->capture_default_str();
  rp->add_option("--n", rf.n)->capture_default_str();
  rp->add_option("--k", rf.k)->check(CLI::Range(0, 64))->capture_default_str();
  rp->add_flag("--search", rf.search, "Also search for the smallest-exponent config");
  rp->add_option("--m-max", rf.m_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  try {
    if (*s) return run_scan(scan);
    if (*w) return run_werner(wf);
    if (*sw) return run_swap(sf);
    if (*cc) return run_commchan(cf);
    if (*rp) return run_repeater(rf);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  } catch (const disq::report::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  } catch (const std::exception& e) {
    std::cerr << "verification error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitFlags;
}
