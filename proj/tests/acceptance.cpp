// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dimwit/constructions.hpp"
#include "dimwit/experiments.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/noise.hpp"
#include "dimwit/random.hpp"
#include "dimwit/search.hpp"
#include "dimwit/strategy.hpp"
#include "dimwit/witness.hpp"
#include "support.hpp"

using namespace dimwit;

namespace {

constexpr double kConstructionRanksBudget = 5.0;  // seconds
constexpr double kBellRanksBudget = 5.0;
constexpr double kSoundnessBudget = 60.0;
constexpr double kNegligibilityBudget = 10.0;
constexpr double kDirectSumTol = 1e-10;
constexpr int kSoundnessSamples = 500;
constexpr int kRelationSamples = 1000;
constexpr int kDirectSumTriples = 100;
constexpr Seed kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
  double budget = 0.0;  // 0 means untimed
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.budget > 0 && secs > o.budget) {
    o.pass = false;
    o.detail += " over budget " + std::to_string(o.budget) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome construction_ranks() {
  Outcome o{true, "", kConstructionRanksBudget};
  for (int k = 1; k <= 50; ++k) {
    const auto r = rank_exact(pm_matrix(p_k(k + 1, k)));
    if (r.rank != k + 1 || r.mode != ScalarKind::exact) {
      o.pass = false;
      o.detail = "k = " + std::to_string(k) + " gave rank " + std::to_string(r.rank);
      return o;
    }
  }
  o.detail = "rank P_k = k+1 for k = 1..50";
  return o;
}

Outcome bell_ranks() {
  Outcome o{true, "", kBellRanksBudget};
  for (int m = 1; m <= 6; ++m)
    for (int n = 2; n <= 6; ++n) {
      const auto r = rank_exact(bell_matrix(l_star(m, n)));
      if (r.rank != m * n - m + 1) {
        o.pass = false;
        o.detail = "(m, n) = (" + std::to_string(m) + ", " + std::to_string(n) + ") gave rank " +
                   std::to_string(r.rank);
        return o;
      }
    }
  o.detail = "rank L = mn-m+1 for m = 1..6, n = 2..6";
  return o;
}

Outcome separation() {
  const auto r = separation_report(8, 9, MembershipOptions{LpMode::exact});
  Outcome o;
  const auto rebuilt = reconstruct(r.behaviour.scenario(), r.certificate);
  o.pass = r.verdict.quantum_lb == 3 && r.verdict.classical_lb == 9 && r.certificate.feasible &&
           r.certificate.mode == LpMode::exact && r.reconstruction_exact && rebuilt == p_k(9, 8);
  o.detail = "quantum_lb " + std::to_string(r.verdict.quantum_lb.value_or(-1)) + ", classical_lb " +
             std::to_string(r.verdict.classical_lb.value_or(-1)) + ", exact C'_2 certificate with " +
             std::to_string(r.certificate.weights.size()) + " strategies";
  return o;
}

Outcome soundness() {
  Outcome o{true, "", kSoundnessBudget};
  const PMScenario sc{10, 9};
  int checked = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int i = 0; i < kSoundnessSamples; ++i) {
      const auto cl = witness_pm(simulate_classical_pm(sample_classical_pm(d, sc, derive_seed(kSeed + d, i))));
      const auto qu = witness_pm(simulate_quantum_pm(sample_quantum_pm(d, sc, derive_seed(kSeed + 10 + d, i))));
      checked += 2;
      if (*cl.classical_lb > d || qu.rank_used > d * d) {
        o.pass = false;
        o.detail = "violation at d = " + std::to_string(d) + ", sample " + std::to_string(i);
        return o;
      }
    }
  }
  for (int i = 0; i < kSoundnessSamples; ++i) {
    const auto st = sample_bell_strategy(2, 2, BellScenario{2, 3}, derive_seed(kSeed + 20, i));
    ++checked;
    if (*witness_bell(simulate_bell(st)).quantum_lb > 2) {
      o.pass = false;
      o.detail = "Bell violation at sample " + std::to_string(i);
      return o;
    }
  }
  o.detail = std::to_string(checked) + " strategies, no bound exceeded";
  return o;
}

Outcome w_relation() {
  Outcome o;
  std::vector<PMBehaviour> behs;
  for (int k = 1; k <= 5; ++k) {
    behs.push_back(p_k(2 * k, k));
    behs.push_back(d_zero(2 * k, k));
    behs.push_back(q_perturbation(2 * k, k));
    for (int i = 1; i <= 2 * k; ++i)
      for (int j = 1; j <= k; ++j) behs.push_back(d_block(2 * k, k, i, j));
  }
  const std::size_t constructions = behs.size();
  for (int i = 0; i < kRelationSamples; ++i) {
    const int y = 1 + i % 4;
    behs.push_back(sample_dyadic_behaviour(PMScenario{2 * y, y}, derive_seed(kSeed + 30, i)));
  }
  for (std::size_t i = 0; i < behs.size(); ++i) {
    const auto rel = appendix_relation(behs[i]);
    const int rw = oracle::rank(w_matrix(behs[i]));
    const int rp = oracle::rank(pm_matrix(behs[i]));
    if (!rel.holds || rel.mode != ScalarKind::exact || rel.rank_w != rw || rel.rank_p != rp || rw > rp) {
      o.pass = false;
      o.detail = "failed on behaviour " + std::to_string(i);
      return o;
    }
  }
  o.detail = "rank W <= rank P on " + std::to_string(constructions) + " constructions and " +
             std::to_string(kRelationSamples) + " random behaviours, exact";
  return o;
}

Outcome noise() {
  Outcome o;
  const std::vector<Scalar> etas{Scalar::ratio(1, 100), Scalar::ratio(1, 2), Scalar::ratio(9, 10)};
  for (int k = 1; k <= 6; ++k) {
    const auto p = p_k(k + 1, k);
    const auto rep = rank_robustness_check(p, uniform_measurement_noise(p.scenario()), etas);
    for (const auto& row : rep.rows) {
      if (row.rank != k + 1 || rep.mode != ScalarKind::exact) {
        o.pass = false;
        o.detail = "P_" + std::to_string(k) + " rank " + std::to_string(row.rank) + " at eta " + row.eta.to_string();
        return o;
      }
    }
  }
  const auto l = l_star(2, 3);
  const auto rep = rank_robustness_check(l, uniform_product_noise(l.scenario()), etas);
  std::string ranks;
  for (const auto& row : rep.rows) {
    ranks += (ranks.empty() ? "" : ",") + std::to_string(row.rank);
    if (row.rank < 4 || row.rank > 6) o.pass = false;
  }
  o.detail = "P_k ranks preserved for k = 1..6; L(2,3) noisy ranks {" + ranks + "}";
  return o;
}

Outcome negligibility() {
  ExperimentConfig cfg;
  cfg.name = "negligibility";
  cfg.n_inputs_a = 4;
  cfg.n_inputs_b = 3;
  cfg.samples = 1000;
  cfg.seed = 7;
  const json r = negligibility_experiment(cfg);
  Outcome o{r["deficient"] == 0, "", kNegligibilityBudget};
  o.detail = std::to_string(r["deficient"].get<int>()) + " of 1000 samples rank-deficient";
  return o;
}

Outcome density() {
  ExperimentConfig cfg;
  cfg.name = "density_restoration";
  cfg.n_inputs_a = 4;
  cfg.n_inputs_b = 3;
  cfg.samples = 1;
  cfg.rank_mode = RankMode::exact;
  std::vector<Scalar> deltas;
  for (int e = 1; e <= 6; ++e) deltas.push_back(Scalar::ratio(1, static_cast<long>(std::pow(10, e))));
  const json r = density_restoration_experiment(cfg, deltas);
  Outcome o;
  const auto d0 = d_zero(4, 3);
  const auto& rows = r["runs"][0]["rows"];
  o.pass = rows.size() == deltas.size();
  for (std::size_t i = 0; o.pass && i < rows.size(); ++i) {
    const Scalar eps = Scalar::parse_rational(rows[i]["epsilon"].get<std::string>());
    const auto pe = p_epsilon(d0, eps);
    double dist = 0.0;
    for (std::size_t t = 0; t < pe.probs().size(); ++t)
      dist = std::max(dist, std::abs(pe.probs()[t].to_double() - d0.probs()[t].to_double()));
    o.pass = rows[i]["success"] == true && dist < deltas[i].to_double() && oracle::rank(pm_matrix(pe)) == 4;
  }
  o.detail = o.pass ? "exact rank 4 within every delta in 1e-1..1e-6" : "restoration failed";
  return o;
}

Outcome direct_sum() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> lam_dist(0.05, 0.95);
  double worst = 0.0;
  for (int i = 0; i < kDirectSumTriples; ++i) {
    const BellScenario sc{2 + i % 2, 2 + (i / 2) % 2};
    const auto s1 = sample_bell_strategy(1 + i % 2, 1 + (i / 3) % 2, sc, derive_seed(kSeed + 40, i));
    const auto s2 = sample_bell_strategy(1 + (i / 5) % 2, 2, sc, derive_seed(kSeed + 41, i));
    const double lam = lam_dist(rng);
    const auto b1 = simulate_bell(s1).probs();
    const auto b2 = simulate_bell(s2).probs();
    const auto mixed = simulate_bell(direct_sum_mixture(s1, s2, lam)).probs();
    for (std::size_t t = 0; t < mixed.size(); ++t)
      worst = std::max(worst, std::abs(mixed[t].to_double() - (lam * b1[t].to_double() + (1 - lam) * b2[t].to_double())));
  }
  o.pass = worst <= kDirectSumTol;
  char buf[96];
  std::snprintf(buf, sizeof buf, "max deviation %.3g over %d triples", worst, kDirectSumTriples);
  o.detail = buf;
  return o;
}

Outcome affine() {
  Outcome o;
  for (const auto& [m, k] : {std::pair{3, 2}, std::pair{4, 3}, std::pair{5, 4}}) {
    std::vector<Matrix> pts{pm_matrix(d_zero(m, k))};
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= k; ++j) pts.push_back(pm_matrix(d_block(m, k, i, j)));
    const int dim = affine_dim(pts, RankMode::exact);
    o.detail += (o.detail.empty() ? "" : ", ") + std::to_string(dim) + " for (" + std::to_string(m) + "," +
                std::to_string(k) + ")";
    if (dim != k * m) o.pass = false;
  }
  o.detail = "affine_dim " + o.detail;
  return o;
}

}  // namespace

int main() {
  criterion(1, "construction ranks", construction_ranks);
  criterion(2, "Bell construction ranks", bell_ranks);
  criterion(3, "separation reproduction", separation);
  criterion(4, "witness soundness", soundness);
  criterion(5, "W versus P rank relation", w_relation);
  criterion(6, "noise robustness", noise);
  criterion(7, "negligibility signature", negligibility);
  criterion(8, "density restoration", density);
  criterion(9, "direct-sum mixture", direct_sum);
  criterion(10, "affine dimension", affine);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
