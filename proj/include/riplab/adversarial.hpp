#pragma once

#include <cmath>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"
#include "riplab/solvers.hpp"

namespace riplab {

// Explicit measurement operators on which equality-constrained l1
// minimization provably fails. Both builders form a scaled projection that
// annihilates a planted null direction, so a k-sparse target shares its
// image with a competitor of no larger l1 norm.

struct AdversarialInstance {
  Mat a;             // p x p scaled projection
  Vec beta0;         // planted k-sparse target
  Vec gamma0;        // competing feasible point (A beta0 = A gamma0)
  Vec null_witness;  // unit direction with A * witness = 0
  double t = 0.0;
  int k = 0;
  int m = 0;             // high-t regime: competitor support size (0 otherwise)
  double m_prime = 0.0;  // high-t regime: fractional support bound (0 otherwise)
  double delta_bound = 0.0;  // analytic cap on the isometry constant of order t*k
  bool strict_l1_gap = false;  // competitor strictly cheaper vs an exact tie
};

// Regime t >= 4/3. The competitor gamma0 spreads the mass of beta0 over m
// coordinates at height k/m', with m' = ((t-1) + sqrt(t(t-1))) k and m the
// largest integer strictly below m'; the gap ||gamma0||_1 = m k / m' < k is
// what defeats the l1 program. The isometry constant of order t*k stays
// within delta_bound = sqrt((t-1)/t) + (1 + sqrt((t-1)/t)) * 5/(2k).
inline AdversarialInstance hard_instance_high_t(double t, int k, int p) {
  if (!(t >= 4.0 / 3.0 - 1e-12)) throw std::domain_error("hard_instance_high_t: t must be >= 4/3");
  if (k < 1) throw std::domain_error("hard_instance_high_t: k must be >= 1");
  const int tk = int(std::ceil(t * double(k) - 1e-12));
  if (p < 2 * tk) throw std::out_of_range("hard_instance_high_t: need p >= 2*ceil(t*k)");

  double m_prime = ((t - 1.0) + std::sqrt(t * (t - 1.0))) * double(k);
  const double rounded = std::round(m_prime);
  if (std::abs(m_prime - rounded) < 1e-9) m_prime = rounded;  // snap exact cases
  const int m = m_prime == rounded ? int(rounded) - 1 : int(std::floor(m_prime));
  if (k + m > p) throw std::out_of_range("hard_instance_high_t: p too small for the spread");

  const double ratio = double(k) / m_prime;
  Vec beta1(p, 0.0);
  for (int i = 0; i < k; ++i) beta1[i] = 1.0;
  for (int i = 0; i < m; ++i) beta1[k + i] = -ratio;
  const double nrm = std::sqrt(double(k) + double(m) * ratio * ratio);
  for (double& v : beta1) v /= nrm;

  const double threshold = std::sqrt(1.0 - 1.0 / t);
  const double c = std::sqrt(1.0 + threshold);
  Mat a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = -c * beta1[i] * beta1[j];
    a(i, i) += c;
  }

  AdversarialInstance inst;
  inst.a = std::move(a);
  inst.beta0.assign(p, 0.0);
  for (int i = 0; i < k; ++i) inst.beta0[i] = 1.0;
  inst.gamma0.assign(p, 0.0);
  for (int i = 0; i < m; ++i) inst.gamma0[k + i] = ratio;
  inst.null_witness = std::move(beta1);
  inst.t = t;
  inst.k = k;
  inst.m = m;
  inst.m_prime = m_prime;
  inst.delta_bound = threshold + (1.0 + threshold) * 5.0 / (2.0 * double(k));
  inst.strict_l1_gap = true;
  return inst;
}

// Regime 0 < t < 4/3. The projection annihilates the flat direction over the
// first 2k coordinates, making beta0 (ones on the first k) and the equally
// cheap beta0' (minus ones on the next k) indistinguishable: recovery fails
// by non-uniqueness rather than strict domination, and the instance carries
// strict_l1_gap = false. The order-ceil(tk) isometry constant equals
// t/(4 - t) exactly when tk is an integer.
inline AdversarialInstance hard_instance_low_t(double t, int k, int p) {
  if (!(t > 0.0) || !(t < 4.0 / 3.0))
    throw std::domain_error("hard_instance_low_t: t must lie in (0, 4/3)");
  if (k < 1) throw std::domain_error("hard_instance_low_t: k must be >= 1");
  if (p < 2 * k) throw std::out_of_range("hard_instance_low_t: need p >= 2k");

  Vec gamma(p, 0.0);
  const double flat = 1.0 / std::sqrt(2.0 * double(k));
  for (int i = 0; i < 2 * k; ++i) gamma[i] = flat;

  const double c = 2.0 / std::sqrt(4.0 - t);
  Mat a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = -c * gamma[i] * gamma[j];
    a(i, i) += c;
  }

  AdversarialInstance inst;
  inst.a = std::move(a);
  inst.beta0.assign(p, 0.0);
  for (int i = 0; i < k; ++i) inst.beta0[i] = 1.0;
  inst.gamma0.assign(p, 0.0);
  for (int i = 0; i < k; ++i) inst.gamma0[k + i] = -1.0;
  inst.null_witness = std::move(gamma);
  inst.t = t;
  inst.k = k;
  inst.m = 0;
  inst.m_prime = 0.0;

  const int tk_ceil = int(std::ceil(t * double(k) - 1e-12));
  const double captured = double(std::min(tk_ceil, 2 * k)) / (2.0 * double(k));
  inst.delta_bound = std::max(4.0 / (4.0 - t) - 1.0,
                              1.0 - 4.0 / (4.0 - t) * (1.0 - captured));
  inst.strict_l1_gap = false;
  return inst;
}

struct FailureReport {
  double l1_objective_at_optimum = 0.0;
  double planted_objective = 0.0;
  bool recovered_planted = false;
};

// Runs equality-constrained l1 minimization on (A, A beta0) and reports
// whether the planted vector came back. On high-t instances the optimum
// objective is at most ||gamma0||_1 < ||beta0||_1, so it never does.
inline FailureReport verify_failure(const AdversarialInstance& inst,
                                    const SolverOptions& opts = {}) {
  RecoveryProblem prob{inst.a, matvec(inst.a, inst.beta0), ConstraintSet::zero()};
  const RecoveryResult res = l1_min(prob, opts);
  FailureReport rep;
  rep.l1_objective_at_optimum = res.objective;
  rep.planted_objective = norm_l1(inst.beta0);
  rep.recovered_planted = norm_l2(sub(res.estimate, inst.beta0)) <= 1e-6;
  return rep;
}

}  // namespace riplab
