#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "dimwit/behaviour.hpp"
#include "dimwit/random.hpp"

namespace dimwit {

/// Complex matrices; Eigen stores std::complex<double> as interleaved (re, im) pairs.
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kOperatorTol = 1e-10;
inline constexpr double kHermitianTol = 1e-8;

/// Classical message of dimension d: sender s(m|x), responder t(b|m,y).
struct ClassicalPMStrategy {
  int d = 1;
  PMScenario scenario;
  Matrix sender;                  // |X| x d, row-stochastic
  std::vector<Scalar> responder;  // index (m*|Y| + y)*2 + b

  const Scalar& t(int m, int y, int b) const {
    return responder[(static_cast<std::size_t>(m) * scenario.n_inputs_b + y) * 2 + b];
  }

  /// Throws StructuralError on shape problems and ConstraintError on stochasticity violations.
  void validate(double tol = kDefaultValidationTol) const;
};

/// States rho_x and two-outcome POVMs Pi_b^y on C^d.
struct QuantumPMStrategy {
  int d = 1;
  PMScenario scenario;
  std::vector<CMatrix> states;              // one per x
  std::vector<std::vector<CMatrix>> povms;  // [y][b]
  std::string povm_law = "explicit";

  /// Symmetrizes Hermitian parts in place (rejecting deviation > 1e-8), then checks
  /// PSD, unit trace and POVM completeness within 1e-10.
  void validate();
};

/// Shared state rho_AB on C^dA (x) C^dB with local measurements E_a^x and F_b^y.
struct BellQuantumStrategy {
  int dA = 1;
  int dB = 1;
  BellScenario scenario;
  CMatrix state;                              // (dA dB) x (dA dB), index iA*dB + iB
  std::vector<std::vector<CMatrix>> meas_a;   // [x][a], dA x dA
  std::vector<std::vector<CMatrix>> meas_b;   // [y][b], dB x dB
  std::string povm_law = "explicit";

  void validate();
};

PMBehaviour simulate_classical_pm(const ClassicalPMStrategy& st);

/// Float behaviour tr(rho_x Pi_b^y). Values outside [0, 1] by at most 1e-10 are
/// clipped; larger excursions throw ConstraintError.
PMBehaviour simulate_quantum_pm(QuantumPMStrategy st);

/// Float behaviour tr(rho_AB E_a^x (x) F_b^y).
BellBehaviour simulate_bell(BellQuantumStrategy st);

/// dim of the joint support of the states: float rank of sum_x rho_x.
int message_dimension(const std::vector<CMatrix>& states);

/// Support dimensions of the two reduced states of rho_AB.
std::pair<int, int> local_support_ranks(const BellQuantumStrategy& st);

/// Strategy on (dA + dA') x (dB + dB') with state lam*rho (+) (1-lam)*rho' and
/// block-diagonal measurements; its behaviour is the lam-mixture of the two.
BellQuantumStrategy direct_sum_mixture(const BellQuantumStrategy& s1,
                                       const BellQuantumStrategy& s2, double lam);

/// Diagonal embedding of a classical strategy (states diag s(.|x), projectors diag t(b|., y)).
QuantumPMStrategy embed_classical(const ClassicalPMStrategy& st);

/// Product state with deterministic projective measurements in the computational basis
/// reproducing the LDB (f, g) at local dimension 1.
BellQuantumStrategy ldb_strategy(const BellScenario& sc, const std::vector<int>& f,
                                 const std::vector<int>& g);

// Sampling. Every sampler is a pure function of its arguments and seed.

inline constexpr const char* kProjectiveLaw = "haar-projective-v1";
inline constexpr const char* kWishartLaw = "wishart-povm-v1";

/// P(0|xy) independent uniform on [0, 1]; floating.
PMBehaviour sample_behaviour(const PMScenario& sc, Seed seed);

/// P(0|xy) = r / 2^bits with r uniform in [0, 2^bits]; exact.
PMBehaviour sample_dyadic_behaviour(const PMScenario& sc, Seed seed, int bits = 16);

/// Simulated behaviour of sample_bell_strategy(local_dim, local_dim, ...). A zero
/// `local_dim` selects m * n.
BellBehaviour sample_behaviour(const BellScenario& sc, Seed seed, int local_dim = 0);

/// Sender rows and responder pairs drawn from Dirichlet(1, ..., 1); floating.
ClassicalPMStrategy sample_classical_pm(int d, const PMScenario& sc, Seed seed);

/// Random exact classical strategy with dyadic probabilities.
ClassicalPMStrategy sample_classical_pm_exact(int d, const PMScenario& sc, Seed seed,
                                              int bits = 8);

/// Normalized Ginibre states; Haar projective measurements coarse-grained to the
/// two outcomes (basis vector i goes to outcome i mod 2). For d = 1 the
/// measurement falls back to a Wishart-normalized POVM.
QuantumPMStrategy sample_quantum_pm(int d, const PMScenario& sc, Seed seed);

/// Normalized Ginibre joint state; measurements as in sample_quantum_pm with n outcomes
/// (Wishart fallback when n > local dimension).
BellQuantumStrategy sample_bell_strategy(int dA, int dB, const BellScenario& sc, Seed seed);

/// Haar-random unitary from the QR of a Ginibre matrix with phase correction.
CMatrix haar_unitary(int d, Rng& rng);

/// Ginibre matrix G G^dagger normalized to unit trace.
CMatrix ginibre_state(int d, Rng& rng);

}  // namespace dimwit
