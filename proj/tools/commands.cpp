#include "commands.hpp"

#include "markovmono/errors.hpp"
#include "markovmono/hitting.hpp"
#include "markovmono/io.hpp"
#include "markovmono/montecarlo.hpp"
#include "markovmono/perturbation.hpp"
#include "markovmono/sensitivity.hpp"
#include "markovmono/stationary.hpp"
#include "markovmono/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

namespace markovmono::cli {

namespace {

using io::Json;

constexpr int kJsonDigits = 12;
constexpr int kHumanDigits = 6;

Json num(double x) {
  return std::isfinite(x) ? Json(io::round_significant(x, kJsonDigits)) : Json(nullptr);
}

Json num_array(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(kHumanDigits) << x;
  return os.str();
}

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v(i));
  return s + "]";
}

std::string fmt_classes(const std::vector<std::vector<std::size_t>>& classes) {
  std::string s;
  for (const auto& c : classes) {
    s += s.empty() ? "{" : " {";
    for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k]);
    s += "}";
  }
  return s;
}

std::string state_name(const TransitionMatrix& m, std::size_t i) {
  return m.labels().empty() ? std::to_string(i) : m.labels()[i];
}

Json structure_json(const StructureReport& r) {
  Json classes = Json::array();
  for (const auto& c : r.communicating_classes) classes.push_back(c);
  return {{"irreducible", r.irreducible},
          {"aperiodic", r.aperiodic},
          {"period", r.irreducible ? Json(r.period) : Json(nullptr)},
          {"communicating_classes", std::move(classes)}};
}

void print_structure(std::ostream& out, const TransitionMatrix& m, const StructureReport& r) {
  out << "states: " << m.size() << "\n";
  out << "irreducible: " << (r.irreducible ? "yes" : "no");
  if (r.irreducible) {
    out << "  period: " << r.period << "  aperiodic: " << (r.aperiodic ? "yes" : "no");
  }
  out << "\nclasses: " << fmt_classes(r.communicating_classes) << "\n";
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << "\n"; }

// Options shared by every subcommand.
struct Common {
  bool json = false;
};

struct AnalyzeArgs : Common {
  std::string chain;
  std::optional<std::size_t> s0;
};

struct SensitivityArgs : Common {
  std::string chain;
  std::size_t s0 = 0;
  std::size_t donor = 0;
  double h = kDefaultFiniteDifferenceStep;
};

struct PerturbArgs : Common {
  std::string chain;
  std::string second;
  std::optional<std::size_t> s0;
};

struct VerifyArgs : Common {
  TrialConfig config;
};

struct SimulateArgs : Common {
  std::string chain;
  std::size_t s0 = 0;
  std::optional<std::size_t> from;
  std::uint64_t trajectories = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const TransitionMatrix m = io::chain_from_json(io::read_json_file(a.chain));
  if (a.s0) m.checked(StateIndex{*a.s0});
  const StructureReport st = structure(m);

  Json doc = {{"n", m.size()}, {"structure", structure_json(st)}};
  if (!m.labels().empty()) doc["labels"] = m.labels();
  if (!st.irreducible) {
    doc["error"] = "not irreducible";
    if (a.json) {
      emit(out, doc);
    } else {
      print_structure(out, m, st);
      out << "error: chain is not irreducible; no invariant distribution analysis\n";
    }
    return kNotIrreducible;
  }

  const Distribution linear = stationary_linear(m);
  std::optional<Distribution> power;
  if (st.aperiodic) power = stationary_power(m);
  Eigen::VectorXd via_return(static_cast<Eigen::Index>(m.size()));
  for (std::size_t s = 0; s < m.size(); ++s) {
    via_return(static_cast<Eigen::Index>(s)) = stationary_via_return_time(m, StateIndex{s});
  }

  doc["stationary"] = {{"linear", num_array(linear.probs)},
                       {"power", power ? num_array(power->probs) : Json(nullptr)},
                       {"return_time", num_array(via_return)},
                       {"residual", num(stationarity_residual(m, linear))}};

  std::optional<HittingProfile> profile;
  double kac_residual = 0.0;
  double system_residual = 0.0;
  if (a.s0) {
    profile = expected_hitting_times(m, StateIndex{*a.s0});
    kac_residual = std::abs(linear[*a.s0] * profile->return_time - 1.0);
    system_residual = hitting_residual(m, *profile);
    doc["hitting"] = {{"s0", *a.s0},
                      {"hit", num_array(profile->hit)},
                      {"return_time", num(profile->return_time)},
                      {"return_time_residual", num(kac_residual)},
                      {"system_residual", num(system_residual)}};
  }

  if (a.json) {
    emit(out, doc);
    return kOk;
  }

  print_structure(out, m, st);
  out << "\nstate        pi(linear)   pi(power)    pi(1/mu)\n";
  for (std::size_t s = 0; s < m.size(); ++s) {
    out << std::left << std::setw(13) << state_name(m, s) << std::setw(13) << fmt(linear[s])
        << std::setw(13) << (power ? fmt((*power)[s]) : std::string("-"))
        << fmt(via_return(static_cast<Eigen::Index>(s))) << "\n";
  }
  out << "stationarity residual: " << fmt(stationarity_residual(m, linear)) << "\n";
  if (profile) {
    out << "\ntarget s0: " << *a.s0 << "\n";
    out << "return time mu: " << fmt(profile->return_time) << "\n";
    out << "hitting times: " << fmt_vector(profile->hit) << "\n";
    out << "|pi(s0) * mu - 1|: " << fmt(kac_residual) << "\n";
    out << "hitting system residual: " << fmt(system_residual) << "\n";
  }
  return kOk;
}

int cmd_sensitivity(const SensitivityArgs& a, std::ostream& out) {
  const TransitionMatrix m = io::chain_from_json(io::read_json_file(a.chain));
  const CouplingSpec spec{StateIndex{a.s0}, StateIndex{a.donor}};
  spec.check(m);
  require_ergodic(m);

  const SensitivityVector sens = coupled_derivative_direct(m, spec);
  const double mu = expected_return_time(m, spec.target);
  const Eigen::VectorXd d_pi = stationary_derivative(sens, mu);
  Eigen::VectorXd fd(sens.d_mu.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const StateIndex row{i};
    fd(static_cast<Eigen::Index>(i)) = finite_difference_feasible(m, spec, row, a.h)
                                           ? finite_difference_check(m, spec, row, a.h)
                                           : std::numeric_limits<double>::quiet_NaN();
  }

  if (a.json) {
    emit(out, {{"s0", a.s0},
               {"donor", a.donor},
               {"return_time", num(mu)},
               {"d_mu", num_array(sens.d_mu)},
               {"fd", num_array(fd)},
               {"d_pi", num_array(d_pi)}});
    return kOk;
  }

  out << "target s0: " << a.s0 << "  donor: " << a.donor << "  return time mu: " << fmt(mu)
      << "\n\nrow          d_mu         fd           d_pi\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << std::left << std::setw(13) << state_name(m, i) << std::setw(13) << fmt(sens.d_mu(k))
        << std::setw(13) << (std::isnan(fd(k)) ? std::string("-") : fmt(fd(k))) << fmt(d_pi(k))
        << "\n";
  }
  const bool all_negative = (sens.d_mu.array() < 0.0).all();
  out << "all d_mu negative: " << (all_negative ? "yes" : "no") << "\n";
  return kOk;
}

int report_violations(const TheoremConditionReport& report, bool json, std::ostream& out) {
  if (json) {
    Json v = Json::array();
    for (const auto& x : report.violations) {
      v.push_back({{"row", x.row}, {"column", x.column}, {"p", num(x.p_value)},
                   {"p_prime", num(x.p_prime_value)}});
    }
    emit(out, {{"mode", "pair"}, {"holds", false}, {"violations", std::move(v)}});
  } else {
    out << "theorem conditions violated:\n";
    for (const auto& x : report.violations) {
      out << "  row " << x.row << ", column " << x.column << ": p = " << fmt(x.p_value)
          << ", p' = " << fmt(x.p_prime_value) << "\n";
    }
  }
  return kConditionsViolated;
}

int cmd_perturb(const PerturbArgs& a, std::ostream& out) {
  const TransitionMatrix base = io::chain_from_json(io::read_json_file(a.chain));
  const Json second = io::read_json_file(a.second);

  if (io::detect_kind(second) == io::DocumentKind::Perturbation) {
    const ElementaryPerturbation pert = io::perturbation_from_json(second);
    if (a.s0 && *a.s0 != pert.spec.target.value) {
      throw InvalidArgument("--s0 disagrees with the perturbation target");
    }
    const StateIndex s0 = pert.spec.target;
    const TransitionMatrix perturbed = apply_elementary(base, pert);
    const double before = stationary_linear(base)[s0];
    const double after = stationary_linear(perturbed)[s0];
    if (a.json) {
      emit(out, {{"mode", "elementary"},
                 {"s0", s0.value},
                 {"donor", pert.spec.donor.value},
                 {"strict", pert.strict()},
                 {"pi_before", num(before)},
                 {"pi_after", num(after)},
                 {"gap", num(after - before)},
                 {"perturbed", io::chain_to_json(perturbed)}});
    } else {
      out << "target s0: " << s0.value << "  donor: " << pert.spec.donor.value << "\n";
      out << "pi(s0) before: " << fmt(before) << "\npi(s0) after:  " << fmt(after)
          << "\ngap: " << fmt(after - before) << "\n";
    }
    return kOk;
  }

  if (!a.s0) throw InvalidArgument("--s0 is required when comparing two chains");
  const TransitionMatrix target = io::chain_from_json(second);
  const StateIndex s0 = base.checked(StateIndex{*a.s0});
  const TheoremConditionReport report = check_theorem_conditions(base, target, s0);
  if (!report.holds) return report_violations(report, a.json, out);
  require_ergodic(base);
  require_ergodic(target);

  const auto moves = decompose(base, target, s0);
  const double before = stationary_linear(base)[s0];
  const double after = stationary_linear(target)[s0];

  Json steps = Json::array();
  TransitionMatrix current = base;
  for (const auto& move : moves) {
    current = apply_elementary(current, move);
    const bool ergodic = structure(current).irreducible;
    steps.push_back({{"donor", move.spec.donor.value},
                     {"c", num_array(move.c)},
                     {"irreducible", ergodic},
                     {"pi", ergodic ? num(stationary_linear(current)[s0]) : Json(nullptr)}});
  }

  if (a.json) {
    emit(out, {{"mode", "pair"},
               {"s0", s0.value},
               {"holds", true},
               {"strict", report.strict},
               {"strict_rows", report.strict_rows},
               {"steps", steps},
               {"pi_before", num(before)},
               {"pi_after", num(after)},
               {"gap", num(after - before)}});
    return kOk;
  }

  out << "target s0: " << s0.value << "\n";
  out << "conditions hold, " << (report.strict ? "strict" : "not strict");
  out << ", gap = " << fmt(after - before) << "\n";
  out << "pi(s0) trajectory:\n  start          " << fmt(before) << "\n";
  for (const auto& s : steps) {
    out << "  donor " << std::left << std::setw(9) << s["donor"].get<std::size_t>()
        << (s["pi"].is_null() ? std::string("(reducible)") : fmt(s["pi"].get<double>())) << "\n";
  }
  out << "pi(s0) after: " << fmt(after) << "\n";
  return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const VerificationReport report = run_suite(a.config);
  if (a.json) {
    emit(out, io::report_to_json(report));
  } else {
    out << "trials: " << report.trials_run << "\nfailures: " << report.failures.size() << "\n";
    out << "min gap pi'(s0) - pi(s0): " << (report.min_gap ? fmt(*report.min_gap) : "-") << "\n";
    for (const auto& f : report.failures) {
      out << "  FAIL " << f.property << " (seed " << f.trial.seed << ", trial " << f.trial.trial
          << ", n " << f.trial.n << ", s0 " << f.trial.s0 << ", donor " << f.trial.donor << ")";
      for (const auto& [k, v] : f.observed) out << " " << k << "=" << fmt(v);
      if (!f.message.empty()) out << " " << f.message;
      out << "\n";
    }
    out << "result: " << (report.pass ? "PASS" : "FAIL") << "\n";
  }
  return report.pass ? kOk : kVerificationFailed;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.trajectories == 0) throw InvalidArgument("-n must be at least 1");
  const TransitionMatrix m = io::chain_from_json(io::read_json_file(a.chain));
  const StateIndex s0 = m.checked(StateIndex{a.s0});
  require_ergodic(m);

  const SimulationOptions options{a.threads, kTrajectoryStepCap};
  SimulationEstimate est;
  double exact = 0.0;
  if (a.from) {
    const StateIndex from = m.checked(StateIndex{*a.from});
    est = simulate_hitting_time(m, from, s0, a.trajectories, a.seed, options);
    exact = expected_hitting_times(m, s0).hit(static_cast<Eigen::Index>(from.value));
  } else {
    est = simulate_return_time(m, s0, a.trajectories, a.seed, options);
    exact = expected_return_time(m, s0);
  }
  const double diff = est.mean - exact;
  double z = 0.0;
  if (est.std_error > 0.0) {
    z = diff / est.std_error;
  } else if (diff != 0.0) {
    z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }

  if (a.json) {
    emit(out, {{"quantity", a.from ? "hitting_time" : "return_time"},
               {"s0", a.s0},
               {"from", a.from ? Json(*a.from) : Json(nullptr)},
               {"trajectories", est.samples},
               {"seed", est.seed},
               {"mean", num(est.mean)},
               {"std_error", num(est.std_error)},
               {"exact", num(exact)},
               {"z", num(z)}});
    return kOk;
  }
  out << (a.from ? "hitting time " + std::to_string(*a.from) + " -> " : std::string("return time to "))
      << a.s0 << "\n";
  out << "trajectories: " << est.samples << "  seed: " << est.seed << "\n";
  out << "simulated mean: " << fmt(est.mean) << "  std error: " << fmt(est.std_error) << "\n";
  out << "exact: " << fmt(exact) << "  z: " << fmt(z) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of finite Markov chains: stationary distributions, return and "
               "hitting times, return-time sensitivities, and monotonicity verification."};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Structure, stationary distribution, hitting times");
  a->add_option("chain", analyze.chain, "Chain JSON file")->required();
  a->add_option("--s0", analyze.s0, "Target state for hitting/return times");
  a->add_flag("--json", analyze.json, "Emit a JSON document");

  SensitivityArgs sens;
  auto* s = app.add_subcommand("sensitivity", "Return-time derivatives under donor->target moves");
  s->add_option("chain", sens.chain, "Chain JSON file")->required();
  s->add_option("--s0", sens.s0, "Target state")->required();
  s->add_option("--donor", sens.donor, "Donor state")->required();
  s->add_option("--step", sens.h, "Finite-difference step")->capture_default_str();
  s->add_flag("--json", sens.json, "Emit a JSON document");

  PerturbArgs pert;
  auto* p = app.add_subcommand("perturb", "Apply a perturbation or compare two chains");
  p->add_option("chain", pert.chain, "Base chain JSON file")->required();
  p->add_option("second", pert.second, "Perturbation JSON or second chain JSON")->required();
  p->add_option("--s0", pert.s0, "Target state");
  p->add_flag("--json", pert.json, "Emit a JSON document");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Randomized monotonicity and identity checks");
  v->add_option("--trials", verify.config.trials, "Number of trials")->capture_default_str();
  v->add_option("--n-min", verify.config.n_min, "Smallest state count")->capture_default_str();
  v->add_option("--n-max", verify.config.n_max, "Largest state count")->capture_default_str();
  v->add_option("--min-entry", verify.config.min_entry, "Entry floor of generated chains")
      ->capture_default_str();
  v->add_option("--seed", verify.config.seed, "Master seed")->capture_default_str();
  v->add_option("--threads", verify.config.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  v->add_flag("--json", verify.json, "Emit a JSON report");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Monte Carlo return (or hitting) times");
  m->add_option("chain", sim.chain, "Chain JSON file")->required();
  m->add_option("--s0", sim.s0, "Target state")->required();
  m->add_option("--from", sim.from, "Start state; estimates the hitting time instead");
  m->add_option("-n,--trajectories", sim.trajectories, "Number of trajectories")
      ->capture_default_str();
  m->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  m->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")->capture_default_str();
  m->add_flag("--json", sim.json, "Emit a JSON document");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& x : args) argv.push_back(x.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (a->parsed()) return cmd_analyze(analyze, out);
    if (s->parsed()) return cmd_sensitivity(sens, out);
    if (p->parsed()) return cmd_perturb(pert, out);
    if (v->parsed()) return cmd_verify(verify, out);
    if (m->parsed()) return cmd_simulate(sim, out);
  } catch (const NotIrreducible& e) {
    err << "error: " << e.what() << "\n";
    return kNotIrreducible;
  } catch (const ConditionsViolated& e) {
    err << "error: " << e.what() << "\n";
    return kConditionsViolated;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace markovmono::cli
