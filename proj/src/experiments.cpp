#include "dimwit/experiments.hpp"

#include <algorithm>
#include <thread>

#include "dimwit/constructions.hpp"
#include "dimwit/errors.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/strategy.hpp"

namespace dimwit {

const char* version() { return DIMWIT_VERSION; }

namespace {

const char* rank_mode_name(RankMode mode) {
  switch (mode) {
    case RankMode::exact: return "exact";
    case RankMode::floating: return "float";
    case RankMode::automatic: return "auto";
  }
  return "auto";
}

// Runs body(i) for i in [0, count) on `threads` workers. Each slot is written by
// exactly one worker, so the outcome does not depend on scheduling.
template <class F>
void parallel_for(int count, unsigned threads, F body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = static_cast<int>(t); i < count; i += static_cast<int>(threads)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct SampleOutcome {
  int rank = 0;
  bool planted = false;
  std::optional<double> sigma_ratio;  // sigma_min / sigma_max of the generic-rank block
};

SampleOutcome measure(const Matrix& mat, int generic, const ExperimentConfig& cfg) {
  SampleOutcome out;
  const bool exact = cfg.rank_mode == RankMode::exact ||
                     (cfg.rank_mode == RankMode::automatic && matrix_kind(mat) == ScalarKind::exact);
  const RankResult r = exact ? rank_exact(mat) : rank_float(mat, cfg.rank_tol);
  out.rank = r.rank;
  if (r.singular_values && !r.singular_values->empty() && r.singular_values->front() > 0 &&
      generic >= 1 && static_cast<std::size_t>(generic) <= r.singular_values->size()) {
    out.sigma_ratio = (*r.singular_values)[generic - 1] / r.singular_values->front();
  }
  return out;
}

json header(const ExperimentConfig& cfg, const char* name) {
  json h = {{"experiment", name},
            {"version", version()},
            {"seed", cfg.seed},
            {"samples", cfg.samples},
            {"rank_mode", rank_mode_name(cfg.rank_mode)},
            {"validation_tolerance", kDefaultValidationTol}};
  h["rank_tolerance"] = cfg.rank_tol ? json(*cfg.rank_tol) : json("max(rows, cols) * machine epsilon");
  return h;
}

}  // namespace

void ExperimentConfig::check() const {
  if (samples < 1) throw PreconditionError("sample count must be at least 1");
  if (bell) {
    BellScenario{m, n}.check();
  } else {
    PMScenario{n_inputs_a, n_inputs_b}.check();
  }
  if (rank_tol && !(*rank_tol > 0)) throw PreconditionError("rank tolerance must be positive");
  if (include.size() > static_cast<std::size_t>(samples)) {
    throw PreconditionError("more planted behaviours than samples");
  }
}

json negligibility_experiment(const ExperimentConfig& cfg) {
  cfg.check();
  if (cfg.bell && cfg.rank_mode == RankMode::exact) {
    throw PreconditionError("sampled Bell behaviours are floating point; exact rank is unavailable");
  }
  const PMScenario pm{cfg.n_inputs_a, cfg.n_inputs_b};
  const BellScenario bs{cfg.m, cfg.n};
  const int generic = cfg.bell ? cfg.m * cfg.n - cfg.m + 1
                               : std::min(cfg.n_inputs_a, cfg.n_inputs_b + 1);

  std::vector<Matrix> planted;
  for (const auto& beh : cfg.include) {
    if (cfg.bell) {
      const auto* b = std::get_if<BellBehaviour>(&beh);
      if (!b || !(b->scenario() == bs)) throw PreconditionError("planted behaviour does not match the Bell scenario");
      planted.push_back(bell_matrix(*b));
    } else {
      const auto* p = std::get_if<PMBehaviour>(&beh);
      if (!p || !(p->scenario() == pm)) throw PreconditionError("planted behaviour does not match the PM scenario");
      planted.push_back(pm_matrix(*p));
    }
  }

  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(cfg.samples));
  parallel_for(cfg.samples, cfg.threads, [&](int i) {
    const auto slot = static_cast<std::size_t>(i);
    if (slot < planted.size()) {
      outcomes[slot] = measure(planted[slot], generic, cfg);
      outcomes[slot].planted = true;
      return;
    }
    const Seed s = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    Matrix mat;
    if (cfg.bell) {
      mat = bell_matrix(sample_behaviour(bs, s, cfg.m * cfg.n));
    } else if (cfg.rank_mode == RankMode::exact) {
      mat = pm_matrix(sample_dyadic_behaviour(pm, s));
    } else {
      mat = pm_matrix(sample_behaviour(pm, s));
    }
    outcomes[slot] = measure(mat, generic, cfg);
  });

  int deficient = 0, planted_deficient = 0;
  json deficient_samples = json::array();
  std::vector<int> histogram(static_cast<std::size_t>(generic) + 1, 0);
  std::optional<double> min_ratio;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    ++histogram[static_cast<std::size_t>(std::clamp(o.rank, 0, generic))];
    if (o.rank < generic) {
      ++deficient;
      if (o.planted) ++planted_deficient;
      deficient_samples.push_back({{"sample", i}, {"rank", o.rank}, {"planted", o.planted}});
    }
    if (!o.planted && o.sigma_ratio) min_ratio = std::min(min_ratio.value_or(*o.sigma_ratio), *o.sigma_ratio);
  }

  json report = header(cfg, "negligibility");
  report["variant"] = cfg.bell ? "bell" : "pm";
  if (cfg.bell) {
    report["scenario"] = {{"m", cfg.m}, {"n", cfg.n}};
    report["local_dimension"] = cfg.m * cfg.n;
    report["sampler"] = kProjectiveLaw;
  } else {
    report["scenario"] = {{"n_inputs_a", cfg.n_inputs_a}, {"n_inputs_b", cfg.n_inputs_b}};
    report["sampler"] = cfg.rank_mode == RankMode::exact ? "dyadic-uniform" : "uniform";
  }
  report["generic_rank"] = generic;
  report["planted"] = planted.size();
  report["deficient"] = deficient;
  report["deficient_planted"] = planted_deficient;
  report["deficient_fraction"] = static_cast<double>(deficient) / cfg.samples;
  report["deficient_samples"] = std::move(deficient_samples);
  report["rank_histogram"] = histogram;
  report["min_sigma_ratio"] = min_ratio ? json(*min_ratio) : json(nullptr);
  report["note"] = "a zero fraction is empirical evidence consistent with measure zero, not a proof";
  return report;
}

json density_restoration_experiment(const ExperimentConfig& cfg, const std::vector<Scalar>& deltas_in) {
  cfg.check();
  if (cfg.bell) throw PreconditionError("density restoration runs in a PM scenario");
  const int mx = cfg.n_inputs_a;
  const int k = cfg.n_inputs_b;
  if (mx < k + 1) throw PreconditionError("density restoration needs |X| >= |Y| + 1");
  const PMScenario sc{mx, k};

  std::vector<Scalar> deltas = deltas_in;
  if (deltas.empty()) {
    for (int e = 1; e <= 6; ++e) {
      Integer p;
      mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
      deltas.emplace_back(Rational(Integer(1), p));
    }
  }
  for (const auto& d : deltas)
    if (d.sign() <= 0) throw PreconditionError("delta must be positive");

  std::vector<std::pair<std::string, PMBehaviour>> planted;
  if (cfg.include.empty()) {
    planted.emplace_back("D_0", d_zero(mx, k));
  } else {
    for (std::size_t i = 0; i < cfg.include.size(); ++i) {
      const auto* p = std::get_if<PMBehaviour>(&cfg.include[i]);
      if (!p || !(p->scenario() == sc)) throw PreconditionError("planted behaviour does not match the PM scenario");
      planted.emplace_back("include[" + std::to_string(i) + "]", *p);
    }
  }

  const int target = k + 1;
  auto rank_of = [&](const PMBehaviour& b) {
    const Matrix mat = pm_matrix(b);
    if (cfg.rank_mode == RankMode::floating) return rank_float(mat, cfg.rank_tol);
    return rank(mat, cfg.rank_tol);
  };
  auto distance = [](const PMBehaviour& a, const PMBehaviour& b) {
    Scalar worst(0);
    for (std::size_t i = 0; i < a.probs().size(); ++i) {
      const Scalar d = abs(a.probs()[i] - b.probs()[i]);
      if (worst < d) worst = d;
    }
    return worst;
  };

  json runs = json::array();
  bool all_ok = true;
  for (const auto& [label, p] : planted) {
    const RankResult base = rank_of(p);
    const RankResult control = rank_of(p_epsilon(p, Scalar(0)));
    json rows = json::array();
    for (const auto& delta : deltas) {
      Scalar eps = delta / Scalar(10);
      json row;
      bool ok = false;
      for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
        const PMBehaviour pe = p_epsilon(p, eps);
        const Scalar dist = distance(p, pe);
        const RankResult r = rank_of(pe);
        ok = dist < delta && r.rank == target;
        row = {{"delta", scalar_to_json(delta)},
               {"epsilon", scalar_to_json(eps)},
               {"distance", scalar_to_json(dist)},
               {"distance_value", dist.to_double()},
               {"rank", r.rank},
               {"mode", to_string(r.mode)},
               {"success", ok}};
        if (!ok) eps = eps / Scalar(10);
      }
      all_ok = all_ok && ok;
      rows.push_back(std::move(row));
    }
    runs.push_back({{"planted", label},
                    {"base_rank", base.rank},
                    {"control", {{"epsilon", 0}, {"rank", control.rank}, {"deficient", control.rank < target}}},
                    {"rows", std::move(rows)}});
  }

  json report = header(cfg, "density_restoration");
  report["scenario"] = {{"n_inputs_a", mx}, {"n_inputs_b", k}};
  report["target_rank"] = target;
  report["norm"] = "max-entry";
  report["runs"] = std::move(runs);
  report["all_success"] = all_ok;
  return report;
}

json nonconvexity_report(int m, int n) {
  const BellScenario sc{m, n};
  sc.check();
  const BellBehaviour l = l_star(m, n);
  const int r = rank_exact(bell_matrix(l)).rank;
  const int threshold = ceil_sqrt(r) - 1;
  json ds = json::array();
  for (int d = 2; d <= threshold; ++d) ds.push_back(d);
  json terms = json::array();
  for (const auto& t : l_star_terms(m, n)) {
    terms.push_back({{"f", t.f}, {"g", t.g}, {"weight", scalar_to_json(t.weight)}});
  }
  json report = {{"experiment", "nonconvexity"},
                 {"version", version()},
                 {"rank_mode", "exact"},
                 {"scenario", {{"m", m}, {"n", n}}},
                 {"rank", r},
                 {"quantum_lb", ceil_sqrt(r)},
                 {"threshold", threshold},
                 {"non_convex_d", std::move(ds)},
                 {"silent", threshold < 2},
                 {"mixture", std::move(terms)},
                 {"behaviour", to_json(l)}};
  report["statement"] = threshold < 2
                            ? "the rank method proves no Q_d non-convex for d >= 2 in this scenario"
                            : "L lies in the convex hull of Q_1 but outside Q_d for every listed d";
  return report;
}

}  // namespace dimwit
