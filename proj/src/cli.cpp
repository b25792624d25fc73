#include "dimwit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "dimwit/constructions.hpp"
#include "dimwit/errors.hpp"
#include "dimwit/experiments.hpp"
#include "dimwit/io.hpp"
#include "dimwit/noise.hpp"
#include "dimwit/search.hpp"
#include "dimwit/strategy.hpp"
#include "dimwit/witness.hpp"

namespace dimwit {

namespace {

struct UsageError : Error {
  using Error::Error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw StructuralError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split_list(s)) {
    try {
      out.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw UsageError("'" + t + "' is not an integer");
    }
  }
  return out;
}

std::string lb_text(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

std::string verdict_text(const WitnessVerdict& v) {
  return std::string(to_string(v.source)) + ": rank " + std::to_string(v.rank_used) + ", classical_lb " +
         lb_text(v.classical_lb) + ", quantum_lb " + lb_text(v.quantum_lb) + " (" +
         (v.certified() ? "certified, exact" : "float, not certified") + ")";
}

RankMode parse_rank_mode(const std::string& s) {
  if (s == "exact") return RankMode::exact;
  if (s == "float") return RankMode::floating;
  return RankMode::automatic;
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void emit(const json& j) {
    out_ << j.dump(2) << "\n";
    if (!out_path_.empty()) {
      std::ofstream f(out_path_);
      if (!f) throw UsageError("cannot write '" + out_path_ + "'");
      f << j.dump(2) << "\n";
    }
  }
  void say(const std::string& line) {
    if (!quiet_) err_ << line << "\n";
  }
  std::optional<double> rank_tol() const { return rank_tol_; }
  WitnessOptions witness_options() const {
    WitnessOptions o;
    o.rank_tol = rank_tol_;
    o.force_float = force_float_;
    return o;
  }

  int cmd_validate();
  int cmd_rank();
  int cmd_witness();
  int cmd_construct();
  int cmd_simulate();
  int cmd_factorize();
  int cmd_membership();
  int cmd_noise();
  int cmd_negligibility();
  int cmd_density();
  int cmd_nonconvexity();
  int cmd_separation();

  std::ostream& out_;
  std::ostream& err_;

  bool quiet_ = false;
  std::optional<double> rank_tol_;
  double rank_tol_flag_ = 0.0;
  bool force_float_ = false;
  std::string in_path_;
  std::string out_path_;

  double validation_tol_ = kDefaultValidationTol;
  std::string matrix_ = "auto";
  std::string family_;
  int m_ = 0, k_ = 0, i_ = 1, j_ = 1, n_ = 2, d_ = 2, x_ = 4, y_ = 3;
  std::string eps_ = "0";
  std::string f_, g_;
  std::string sample_;
  std::string strategy_out_;
  Seed seed_ = 0;
  FactorizationOptions fact_;
  bool exact_lp_ = false;
  std::uint64_t cap_ = kDefaultEnumerationCap;
  double lp_tol_ = 1e-9;
  std::string noise_path_;
  std::vector<std::string> etas_;
  std::string emit_eta_;
  bool bell_ = false;
  bool pm_ = false;
  int samples_ = 1000;
  std::vector<std::string> includes_;
  std::string rank_mode_;
  unsigned threads_ = 0;
  std::vector<std::string> deltas_;
};

int Cli::cmd_validate() {
  const auto beh = behaviour_from_json(read_json(in_path_));
  const auto report = std::visit(
      [&](const auto& b) {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, PMBehaviour>) {
          return validate_pm(b, validation_tol_);
        } else {
          return validate_bell(b, validation_tol_);
        }
      },
      beh);
  emit(to_json(report));
  if (report.valid()) {
    say("valid behaviour");
    return kExitOk;
  }
  say(std::to_string(report.violations.size()) + " violation(s); first: " + report.violations.front().message);
  return kExitVerdict;
}

int Cli::cmd_rank() {
  const auto beh = behaviour_from_json(read_json(in_path_));
  Matrix mat;
  std::string which = matrix_;
  if (const auto* p = std::get_if<PMBehaviour>(&beh)) {
    if (which == "auto") which = "pm";
    if (which == "pm") {
      mat = pm_matrix(*p);
    } else if (which == "w") {
      mat = w_matrix(*p);
    } else {
      throw UsageError("matrix '" + which + "' does not apply to a prepare-and-measure behaviour");
    }
  } else {
    if (which == "auto") which = "bell";
    if (which != "bell") throw UsageError("matrix '" + which + "' does not apply to a Bell behaviour");
    mat = bell_matrix(std::get<BellBehaviour>(beh));
  }
  const RankResult r = rank(mat, rank_tol_, force_float_);
  json j = to_json(r);
  j["matrix"] = which;
  j["rows"] = mat.rows();
  j["cols"] = mat.cols();
  emit(j);
  say(which + " matrix " + std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()) + ": rank " +
      std::to_string(r.rank) + " (" + to_string(r.mode) + ")");
  return kExitOk;
}

int Cli::cmd_witness() {
  const auto beh = behaviour_from_json(read_json(in_path_));
  const auto opts = witness_options();
  if (const auto* p = std::get_if<PMBehaviour>(&beh)) {
    const WitnessVerdict vp = witness_pm(*p, opts);
    json j = to_json(vp);
    j["kind"] = "pm";
    say(verdict_text(vp));
    const auto& sc = p->scenario();
    if (sc.n_inputs_a == 2 * sc.n_inputs_b) {
      const WitnessVerdict vw = witness_w(*p, opts);
      j["w"] = to_json(vw);
      j["w_relation"] = to_json(appendix_relation(*p, opts));
      say(verdict_text(vw));
    }
    emit(j);
    return kExitOk;
  }
  const WitnessVerdict v = witness_bell(std::get<BellBehaviour>(beh), opts);
  json j = to_json(v);
  j["kind"] = "bell";
  j["rank"] = v.rank_used;
  emit(j);
  say(verdict_text(v));
  return kExitOk;
}

int Cli::cmd_construct() {
  const int m = m_;
  auto build = [&]() -> AnyBehaviour {
    if (family_ == "d_block") return d_block(m, k_, i_, j_);
    if (family_ == "d_zero") return d_zero(m, k_);
    if (family_ == "p_k") return p_k(m, k_);
    if (family_ == "q") return q_perturbation(m, k_);
    if (family_ == "p_epsilon") {
      PMBehaviour base = d_zero(m, k_);
      if (!in_path_.empty()) {
        const auto in = behaviour_from_json(read_json(in_path_));
        const auto* p = std::get_if<PMBehaviour>(&in);
        if (!p) throw UsageError("p_epsilon needs a prepare-and-measure base behaviour");
        base = *p;
      }
      return p_epsilon(base, parse_exact_decimal(eps_));
    }
    if (family_ == "ldb") return ldb(m, n_, parse_ints(f_), parse_ints(g_));
    if (family_ == "l_star") return l_star(m, n_);
    throw UsageError("unknown family '" + family_ + "'");
  };
  AnyBehaviour beh = build();
  if (force_float_) {
    std::visit([](auto& b) { b = b.to_floating(); }, beh);
  }
  emit(to_json(beh));
  say("constructed " + family_);
  return kExitOk;
}

int Cli::cmd_simulate() {
  AnyStrategy st;
  if (!sample_.empty()) {
    const PMScenario pm{x_, y_};
    if (sample_ == "classical") {
      st = sample_classical_pm(d_, pm, seed_);
    } else if (sample_ == "classical-exact") {
      st = sample_classical_pm_exact(d_, pm, seed_);
    } else if (sample_ == "quantum") {
      st = sample_quantum_pm(d_, pm, seed_);
    } else if (sample_ == "bell") {
      st = sample_bell_strategy(d_, d_, BellScenario{m_, n_}, seed_);
    } else {
      throw UsageError("unknown sampler '" + sample_ + "'");
    }
  } else if (!in_path_.empty()) {
    st = strategy_from_json(read_json(in_path_));
  } else {
    throw UsageError("simulate needs --in or --sample");
  }
  if (!strategy_out_.empty()) {
    std::ofstream f(strategy_out_);
    if (!f) throw UsageError("cannot write '" + strategy_out_ + "'");
    f << std::visit([](const auto& s) { return to_json(s); }, st).dump(2) << "\n";
  }
  if (const auto* c = std::get_if<ClassicalPMStrategy>(&st)) {
    emit(to_json(simulate_classical_pm(*c)));
    say("simulated classical strategy, d = " + std::to_string(c->d));
  } else if (const auto* q = std::get_if<QuantumPMStrategy>(&st)) {
    emit(to_json(simulate_quantum_pm(*q)));
    say("simulated quantum strategy, d = " + std::to_string(q->d) + ", message dimension " +
        std::to_string(message_dimension(q->states)));
  } else {
    const auto& b = std::get<BellQuantumStrategy>(st);
    const auto [ra, rb] = local_support_ranks(b);
    emit(to_json(simulate_bell(b)));
    say("simulated Bell strategy, local support ranks " + std::to_string(ra) + ", " + std::to_string(rb));
  }
  return kExitOk;
}

int Cli::cmd_factorize() {
  const auto beh = behaviour_from_json(read_json(in_path_));
  const auto* p = std::get_if<PMBehaviour>(&beh);
  if (!p) throw UsageError("factorize needs a prepare-and-measure behaviour");
  fact_.seed = seed_;
  const auto r = factorize_classical(*p, d_, fact_);
  emit(to_json(r));
  const bool found = r.status == FactorizationStatus::found;
  say(std::string(found ? "found" : "no") + " d = " + std::to_string(d_) + " model, residual " +
      format_double(r.residual) + (found ? "" : " (not a proof of non-membership)"));
  return found ? kExitOk : kExitVerdict;
}

int Cli::cmd_membership() {
  const auto beh = behaviour_from_json(read_json(in_path_));
  const auto* p = std::get_if<PMBehaviour>(&beh);
  if (!p) throw UsageError("membership needs a prepare-and-measure behaviour");
  MembershipOptions o;
  o.mode = exact_lp_ ? LpMode::exact : LpMode::floating;
  o.tolerance = lp_tol_;
  o.cap = cap_;
  const auto c = membership_shared_randomness(*p, d_, o);
  emit(to_json(c));
  say(std::string(c.feasible ? "feasible" : "infeasible") + " with shared randomness at d = " +
      std::to_string(d_) + " (" + (exact_lp_ ? "exact" : "float") + " LP)");
  return c.feasible ? kExitOk : kExitVerdict;
}

int Cli::cmd_noise() {
  const auto beh = behaviour_from_json(read_json(in_path_));
  std::optional<NoiseModel> model;
  if (!noise_path_.empty()) model = noise_from_json(read_json(noise_path_));
  if (!model) {
    if (const auto* p = std::get_if<PMBehaviour>(&beh)) {
      model = uniform_measurement_noise(p->scenario());
    } else {
      model = uniform_product_noise(std::get<BellBehaviour>(beh).scenario());
    }
  }
  if (!emit_eta_.empty()) {
    const Scalar eta = parse_exact_decimal(emit_eta_);
    std::visit([&](const auto& b) { emit(to_json(apply_noise(b, *model, eta))); }, beh);
    say("noisy behaviour at eta = " + eta.to_string());
    return kExitOk;
  }
  std::vector<Scalar> etas;
  if (etas_.empty()) etas_ = {"1/100", "1/2", "9/10"};
  for (const auto& e : etas_) etas.push_back(parse_exact_decimal(e));
  const auto report =
      std::visit([&](const auto& b) { return rank_robustness_check(b, *model, etas, rank_tol_); }, beh);
  emit(to_json(report));
  say(std::string(report.all_ok() ? "rank claim holds" : "rank claim fails") + " for every eta (base rank " +
      std::to_string(report.base_rank) + ", " + to_string(report.mode) + ")");
  return report.all_ok() ? kExitOk : kExitVerdict;
}

int Cli::cmd_negligibility() {
  ExperimentConfig cfg;
  cfg.name = "negligibility";
  cfg.bell = bell_ && !pm_;
  cfg.n_inputs_a = x_;
  cfg.n_inputs_b = y_;
  cfg.m = m_;
  cfg.n = n_;
  cfg.samples = samples_;
  cfg.seed = seed_;
  cfg.rank_mode = rank_mode_.empty() ? RankMode::floating : parse_rank_mode(rank_mode_);
  cfg.rank_tol = rank_tol_;
  cfg.threads = threads_;
  for (const auto& path : includes_) cfg.include.push_back(behaviour_from_json(read_json(path)));
  const json r = negligibility_experiment(cfg);
  emit(r);
  say(std::to_string(r["deficient"].get<int>()) + " of " + std::to_string(samples_) +
      " samples rank-deficient (" + std::to_string(r["planted"].get<int>()) + " planted)");
  return kExitOk;
}

int Cli::cmd_density() {
  ExperimentConfig cfg;
  cfg.name = "density_restoration";
  cfg.n_inputs_a = x_;
  cfg.n_inputs_b = y_;
  cfg.samples = 1;
  cfg.seed = seed_;
  cfg.rank_mode = rank_mode_.empty() ? RankMode::automatic : parse_rank_mode(rank_mode_);
  cfg.rank_tol = rank_tol_;
  for (const auto& path : includes_) cfg.include.push_back(behaviour_from_json(read_json(path)));
  cfg.samples = std::max<int>(1, static_cast<int>(cfg.include.size()));
  std::vector<Scalar> deltas;
  for (const auto& d : deltas_) deltas.push_back(parse_exact_decimal(d));
  const json r = density_restoration_experiment(cfg, deltas);
  emit(r);
  const bool ok = r["all_success"].get<bool>();
  say(ok ? "rank restored at every delta" : "rank not restored at some delta");
  return ok ? kExitOk : kExitVerdict;
}

int Cli::cmd_nonconvexity() {
  const json r = nonconvexity_report(m_, n_);
  emit(r);
  say("rank " + std::to_string(r["rank"].get<int>()) + ", threshold " + std::to_string(r["threshold"].get<int>()) +
      (r["silent"].get<bool>() ? ", rank method silent" : ""));
  return kExitOk;
}

int Cli::cmd_separation() {
  const int m = m_ > 0 ? m_ : k_ + 1;
  const auto r = separation_report(k_, m);
  json j = to_json(r);
  j["version"] = version();
  emit(j);
  say("P_" + std::to_string(k_) + ": " + verdict_text(r.verdict) + ", shared-randomness d = 2 " +
      (r.certificate.feasible ? "feasible" : "infeasible"));
  return r.certificate.feasible && r.reconstruction_exact ? kExitOk : kExitVerdict;
}

int Cli::run(const std::vector<std::string>& args) {
  CLI::App app{"Device-independent dimension witnesses from behaviour ranks", "dimwit"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("-q,--quiet", quiet_, "suppress the summary on stderr");
  auto* tol_opt = app.add_option("--rank-tol", rank_tol_flag_, "relative float rank tolerance")
                      ->check(CLI::PositiveNumber);
  app.add_option("-o,--out", out_path_, "also write the JSON result to this file");

  auto in_option = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--in", in_path_, "input JSON file")->check(CLI::ExistingFile);
    if (required) o->required();
  };

  auto* validate = app.add_subcommand("validate", "check positivity, normalization and no-signaling");
  in_option(validate, true);
  validate->add_option("--tol", validation_tol_, "validation tolerance for float input");

  auto* rank_cmd = app.add_subcommand("rank", "rank of the behaviour matrix");
  in_option(rank_cmd, true);
  rank_cmd->add_option("--matrix", matrix_, "pm, w or bell")->check(CLI::IsMember({"auto", "pm", "w", "bell"}));
  rank_cmd->add_flag("--float", force_float_, "use float rank on exact input");

  auto* witness = app.add_subcommand("witness", "dimension lower bounds");
  in_option(witness, true);
  witness->add_flag("--float", force_float_, "use float rank on exact input");

  auto* construct = app.add_subcommand("construct", "build a named behaviour");
  construct->add_option("family,--family", family_, "d_block, d_zero, p_k, q, p_epsilon, ldb or l_star")->required();
  construct->add_option("--m", m_, "|X| for PM families, inputs per party for Bell")->required();
  construct->add_option("--k", k_, "|Y|");
  construct->add_option("--i", i_, "block row (1-based)");
  construct->add_option("--j", j_, "block column (1-based)");
  construct->add_option("--n", n_, "outputs per party");
  construct->add_option("--eps", eps_, "mixing weight, decimal or p/q");
  construct->add_option("--f", f_, "Alice's outputs, comma separated");
  construct->add_option("--g", g_, "Bob's outputs, comma separated");
  construct->add_flag("--float", force_float_, "emit float numbers");
  in_option(construct, false);

  auto* simulate = app.add_subcommand("simulate", "behaviour of a strategy");
  in_option(simulate, false);
  simulate->add_option("--sample", sample_, "classical, classical-exact, quantum or bell");
  simulate->add_option("--d", d_, "message or local dimension");
  simulate->add_option("--x", x_, "|X|");
  simulate->add_option("--y", y_, "|Y|");
  simulate->add_option("--m", m_, "Bell inputs per party");
  simulate->add_option("--n", n_, "Bell outputs per party");
  simulate->add_option("--seed", seed_);
  simulate->add_option("--strategy-out", strategy_out_, "write the sampled strategy here");

  auto* factorize = app.add_subcommand("factorize", "search for a classical model of dimension d");
  in_option(factorize, true);
  factorize->add_option("--d", d_)->required();
  factorize->add_option("--restarts", fact_.restarts);
  factorize->add_option("--iterations", fact_.iterations);
  factorize->add_option("--tolerance", fact_.tolerance);
  factorize->add_option("--seed", seed_);

  auto* membership = app.add_subcommand("membership", "LP membership with shared randomness");
  in_option(membership, true);
  membership->add_option("--d", d_)->required();
  membership->add_flag("--exact", exact_lp_, "rational LP");
  membership->add_option("--cap", cap_, "cap on the number of responder tables");
  membership->add_option("--tolerance", lp_tol_);

  auto* noise = app.add_subcommand("noise", "rank under white or custom noise");
  in_option(noise, true);
  noise->add_option("--noise", noise_path_, "noise model file (uniform noise by default)")->check(CLI::ExistingFile);
  noise->add_option("--eta", etas_, "visibilities, decimal or p/q");
  noise->add_option("--emit", emit_eta_, "output the noisy behaviour at this eta instead");

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo and structural experiments");
  experiment->require_subcommand(1);
  auto* neg = experiment->add_subcommand("negligibility", "fraction of rank-deficient samples");
  neg->add_flag("--pm", pm_, "prepare-and-measure variant (default)");
  neg->add_flag("--bell", bell_, "Bell variant");
  neg->add_option("--x", x_, "|X|");
  neg->add_option("--y", y_, "|Y|");
  neg->add_option("--m", m_, "Bell inputs per party");
  neg->add_option("--outputs", n_, "Bell outputs per party");
  neg->add_option("--n,--samples", samples_, "number of samples");
  neg->add_option("--seed", seed_);
  neg->add_option("--include", includes_, "planted behaviour files")->check(CLI::ExistingFile);
  neg->add_option("--rank-mode", rank_mode_)->check(CLI::IsMember({"auto", "exact", "float"}));
  neg->add_option("--threads", threads_);

  auto* dens = experiment->add_subcommand("density", "restore full rank by a small perturbation");
  dens->add_option("--x", x_, "|X|");
  dens->add_option("--y", y_, "|Y|");
  dens->add_option("--delta", deltas_, "distances, decimal or p/q");
  dens->add_option("--include", includes_, "planted behaviour files")->check(CLI::ExistingFile);
  dens->add_option("--rank-mode", rank_mode_)->check(CLI::IsMember({"auto", "exact", "float"}));

  auto* nonconv = experiment->add_subcommand("nonconvexity", "non-convexity of Q_d via L");
  nonconv->add_option("--m", m_)->required();
  nonconv->add_option("--outputs", n_)->required();

  auto* sep = experiment->add_subcommand("separation", "P_k: quantum bound vs shared-randomness model");
  sep->add_option("--k", k_)->required();
  sep->add_option("--m", m_, "|X|, default k + 1");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (tol_opt->count() > 0) {
    rank_tol_ = rank_tol_flag_;
  } else if (const char* env = std::getenv("DIMWIT_RANK_TOL"); env && *env) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used != std::string(env).size() || !(v > 0)) throw std::invalid_argument(env);
      rank_tol_ = v;
    } catch (const std::exception&) {
      err_ << "DIMWIT_RANK_TOL must be a positive number\n";
      return kExitUsage;
    }
  }

  auto fail = [&](const char* kind, const std::exception& e, int code) {
    json j = {{"error", kind}, {"message", e.what()}};
    if (const auto* cap = dynamic_cast<const CapExceeded*>(&e)) {
      j["required"] = cap->required();
      j["cap"] = cap->cap();
    }
    out_ << j.dump(2) << "\n";
    err_ << "error: " << e.what() << "\n";
    return code;
  };

  try {
    if (validate->parsed()) return cmd_validate();
    if (rank_cmd->parsed()) return cmd_rank();
    if (witness->parsed()) return cmd_witness();
    if (construct->parsed()) return cmd_construct();
    if (simulate->parsed()) return cmd_simulate();
    if (factorize->parsed()) return cmd_factorize();
    if (membership->parsed()) return cmd_membership();
    if (noise->parsed()) return cmd_noise();
    if (neg->parsed()) return cmd_negligibility();
    if (dens->parsed()) return cmd_density();
    if (nonconv->parsed()) return cmd_nonconvexity();
    if (sep->parsed()) return cmd_separation();
  } catch (const UsageError& e) {
    return fail("usage", e, kExitUsage);
  } catch (const PreconditionError& e) {
    return fail("precondition", e, kExitUsage);
  } catch (const WrongModeError& e) {
    return fail("wrong_mode", e, kExitUsage);
  } catch (const StructuralError& e) {
    return fail("structural", e, kExitVerdict);
  } catch (const ConstraintError& e) {
    return fail("constraint", e, kExitVerdict);
  } catch (const CapExceeded& e) {
    return fail("cap_exceeded", e, kExitVerdict);
  } catch (const UnsupportedScenario& e) {
    return fail("unsupported_scenario", e, kExitVerdict);
  } catch (const SolverFailure& e) {
    return fail("solver_failure", e, kExitVerdict);
  }
  return kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Cli(out, err).run(args);
}

}  // namespace dimwit
