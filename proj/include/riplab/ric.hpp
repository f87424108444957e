#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"
#include "riplab/lp.hpp"
#include "riplab/rng.hpp"

namespace riplab {

// Restricted isometry and orthogonality constants, computed exactly by
// support enumeration at desk scale, plus the closed-form threshold curves
// and the recovery-guarantee decision rules built on them.

enum class RicMethod { ExactEnumeration, SampledLowerBound };

struct RicReport {
  double order = 0.0;  // as requested; non-integers round up to the
                       // effective order
  double value = 0.0;
  RicMethod method = RicMethod::ExactEnumeration;
  long supports_examined = 0;
};

namespace detail {

constexpr long kEnumerationBudget = 1000000;

inline long binomial_within_budget(int p, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) {
    c *= double(p - i) / double(i + 1);
    if (c > 4.0 * double(kEnumerationBudget)) return -1;
  }
  return long(c + 0.5);
}

// Visits all k-subsets of {0..p-1} in lexicographic order.
template <class F>
void for_each_support(int p, int k, F&& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) {
    f(idx);
    return;
  }
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == p - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double restricted_deviation(const Mat& a, const std::vector<int>& support) {
  const int k = int(support.size());
  Mat g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      for (int r = 0; r < a.rows; ++r) s += a(r, support[i]) * a(r, support[j]);
      g(i, j) = s;
      g(j, i) = s;
    }
  const Vec ev = symmetric_eigenvalues(g);
  return std::max(ev.back() - 1.0, 1.0 - ev.front());
}

}  // namespace detail

// Smallest delta with (1-delta)|b|^2 <= |Ab|^2 <= (1+delta)|b|^2 over all
// ceil(s)-sparse b, as the max over supports of the extreme Gram eigenvalue
// deviation. Non-integer orders use the next integer.
inline RicReport ric_exact(const Mat& a, double s) {
  const int p = a.cols;
  const int se = int(std::ceil(s - 1e-12));
  if (se < 1 || se > p) throw std::domain_error("ric_exact: order out of [1, p]");
  const long count = detail::binomial_within_budget(p, se);
  if (count < 0 || count > detail::kEnumerationBudget)
    throw budget_error("ric_exact: support count exceeds enumeration budget; "
                       "use ric_sampled for a lower bound");
  RicReport rep;
  rep.order = s;
  rep.method = RicMethod::ExactEnumeration;
  double worst = 0.0;
  detail::for_each_support(p, se, [&](const std::vector<int>& sup) {
    worst = std::max(worst, detail::restricted_deviation(a, sup));
    ++rep.supports_examined;
  });
  rep.value = std::max(0.0, worst);
  return rep;
}

// Smallest theta with |<Ab1, Ab2>| <= theta |b1| |b2| over disjointly
// supported k1- and k2-sparse pairs: the max over disjoint support pairs of
// the top singular value of the cross Gram block.
inline double roc_exact(const Mat& a, int k1, int k2) {
  const int p = a.cols;
  if (k1 < 1 || k2 < 1 || k1 + k2 > p)
    throw std::domain_error("roc_exact: need k1, k2 >= 1 and k1 + k2 <= p");
  const long c1 = detail::binomial_within_budget(p, k1);
  const long c2 = detail::binomial_within_budget(p - k1, k2);
  if (c1 < 0 || c2 < 0 || double(c1) * double(c2) > detail::kEnumerationBudget)
    throw budget_error("roc_exact: support pair count exceeds enumeration budget");

  double worst = 0.0;
  detail::for_each_support(p, k1, [&](const std::vector<int>& s1) {
    std::vector<bool> used(p, false);
    for (int i : s1) used[i] = true;
    std::vector<int> rest;
    rest.reserve(p - k1);
    for (int i = 0; i < p; ++i)
      if (!used[i]) rest.push_back(i);
    detail::for_each_support(int(rest.size()), k2, [&](const std::vector<int>& pick) {
      Mat cross(k1, k2);
      for (int i = 0; i < k1; ++i)
        for (int j = 0; j < k2; ++j) {
          double s = 0.0;
          for (int r = 0; r < a.rows; ++r) s += a(r, s1[i]) * a(r, rest[pick[j]]);
          cross(i, j) = s;
        }
      // largest singular value via the small Gram eigenproblem
      const Mat g = k1 <= k2 ? matmul(cross, transpose(cross))
                             : matmul(transpose(cross), cross);
      const Vec ev = symmetric_eigenvalues(g);
      worst = std::max(worst, std::sqrt(std::max(0.0, ev.back())));
    });
  });
  return worst;
}

// Certified lower bound on the rank-r isometry constant of a linear map.
// Each trial refines a random unit-Frobenius rank-r factor pair by 50
// alternating steps, each solving the exact generalized eigenproblem in one
// factor; every evaluated point is feasible, so the running max never
// overstates the constant.
inline RicReport ric_sampled(const LinearMap& map, int r, int trials,
                             std::uint64_t seed) {
  const int m = map.m, n = map.n;
  if (r < 1 || r > std::min(m, n)) throw std::domain_error("ric_sampled: bad rank");
  if (trials < 1) throw std::domain_error("ric_sampled: trials must be >= 1");

  auto deviation = [&](const Mat& g, const Mat& h) {
    Mat x = matmul(g, transpose(h));
    const double f = frobenius_norm(x);
    if (f == 0.0) return 0.0;
    for (double& v : x.a) v /= f;
    const Vec img = map.apply(x);
    return std::abs(dot(img, img) - 1.0);
  };

  // columns of the q x (rows*r) matrix obtained by freezing one factor
  auto frozen_operator = [&](const Mat& fixed, int rows, bool fixed_is_right) {
    Mat b(map.q(), rows * r);
    for (int c = 0; c < r; ++c)
      for (int i = 0; i < rows; ++i) {
        Mat unit = fixed_is_right ? Mat(rows, fixed.rows) : Mat(fixed.rows, rows);
        if (fixed_is_right) {
          for (int jj = 0; jj < fixed.rows; ++jj) unit(i, jj) = fixed(jj, c);
        } else {
          for (int ii = 0; ii < fixed.rows; ++ii) unit(ii, i) = fixed(ii, c);
        }
        const Vec col = map.apply(unit);
        for (int row = 0; row < map.q(); ++row) b(row, c * rows + i) = col[row];
      }
    return b;
  };

  auto factor_step = [&](Mat& var, const Mat& fixed, bool var_is_left) {
    const int rows = var.rows;
    const Mat b = frozen_operator(fixed, rows, var_is_left);
    Mat q = gram(b);
    // constraint Gram: kron(fixed'fixed, I_rows), ridged for safety
    const Mat ff = gram(fixed);
    Mat sgram(rows * r, rows * r);
    for (int c1 = 0; c1 < r; ++c1)
      for (int c2 = 0; c2 < r; ++c2)
        for (int i = 0; i < rows; ++i)
          sgram(c1 * rows + i, c2 * rows + i) = ff(c1, c2);
    double tr = 0.0;
    for (int i = 0; i < rows * r; ++i) tr += sgram(i, i);
    const double ridge = 1e-12 * std::max(tr / (rows * r), 1e-30);
    for (int i = 0; i < rows * r; ++i) sgram(i, i) += ridge;

    const Mat l = cholesky(sgram);
    // M = L^{-1} Q L^{-T}
    Mat mm(rows * r, rows * r);
    for (int col = 0; col < rows * r; ++col) {
      Vec e(rows * r, 0.0);
      for (int i = 0; i < rows * r; ++i) e[i] = q(i, col);
      Vec w = forward_solve(l, e);
      for (int i = 0; i < rows * r; ++i) mm(i, col) = w[i];
    }
    Mat mt = transpose(mm);
    for (int col = 0; col < rows * r; ++col) {
      Vec e(rows * r, 0.0);
      for (int i = 0; i < rows * r; ++i) e[i] = mt(i, col);
      Vec w = forward_solve(l, e);
      for (int i = 0; i < rows * r; ++i) mm(i, col) = w[i];
    }
    // symmetrize against round-off before the eigensolve
    for (int i = 0; i < rows * r; ++i)
      for (int j = i + 1; j < rows * r; ++j) {
        const double avg = 0.5 * (mm(i, j) + mm(j, i));
        mm(i, j) = avg;
        mm(j, i) = avg;
      }
    const SymEig eig = symmetric_eigen(mm);
    const int pick = std::abs(eig.values.front() - 1.0) >
                             std::abs(eig.values.back() - 1.0)
                         ? 0
                         : int(eig.values.size()) - 1;
    Vec u(rows * r);
    for (int i = 0; i < rows * r; ++i) u[i] = eig.vectors(i, pick);
    const Vec g = backward_solve_t(l, u);
    for (int c = 0; c < r; ++c)
      for (int i = 0; i < rows; ++i) var(i, c) = g[c * rows + i];
  };

  Rng rng(seed);
  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Mat g(m, r), h(n, r);
    for (double& v : g.a) v = rng.next_gaussian();
    for (double& v : h.a) v = rng.next_gaussian();
    best = std::max(best, deviation(g, h));
    for (int step = 0; step < 50; ++step) {
      factor_step(g, h, /*var_is_left=*/true);
      best = std::max(best, deviation(g, h));
      factor_step(h, g, /*var_is_left=*/false);
      best = std::max(best, deviation(g, h));
    }
  }
  RicReport rep;
  rep.order = r;
  rep.value = best;
  rep.method = RicMethod::SampledLowerBound;
  rep.supports_examined = trials;
  return rep;
}

// Null space property of order k: every nonzero null vector h satisfies
// ||h_max(k)||_1 < ||h_-max(k)||_1. For each support S the inner problem
//
//     max  ||h_S||_1 - ||h_{S^c}||_1   over  A h = 0, ||h||_1 <= 1
//
// is solved exactly as a family of sign-split LPs (one per sign pattern on
// S); the property holds iff every maximum over unit-norm null vectors stays
// below -1e-10.
inline bool nsp_verify(const Mat& a, int k) {
  const int p = a.cols;
  if (k < 1 || k > p) throw std::domain_error("nsp_verify: order out of [1, p]");
  const long count = detail::binomial_within_budget(p, k);
  if (count < 0 || count > detail::kEnumerationBudget || k > 20)
    throw budget_error("nsp_verify: support/sign-pattern count exceeds enumeration budget");

  {  // trivial null space certifies the property outright
    const Svd f = svd(a);
    const double smax = f.s.empty() ? 0.0 : f.s.front();
    if (a.rows >= p && !f.s.empty() && f.s.back() > 1e-12 * std::max(smax, 1.0))
      return true;
  }

  // standard form: variables [h+, h-, slack]; A(h+ - h-) = 0 and
  // sum(h+ + h-) + slack = 1
  const int nvars = 2 * p + 1;
  Mat lp_a(a.rows + 1, nvars);
  Vec lp_b(a.rows + 1, 0.0);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < p; ++j) {
      lp_a(i, j) = a(i, j);
      lp_a(i, p + j) = -a(i, j);
    }
  for (int j = 0; j < 2 * p; ++j) lp_a(a.rows, j) = 1.0;
  lp_a(a.rows, 2 * p) = 1.0;
  lp_b[a.rows] = 1.0;

  bool property = true;
  detail::for_each_support(p, k, [&](const std::vector<int>& sup) {
    if (!property) return;
    double alpha_s = 0.0;  // max of ||h_S||_1 over the null-space l1 ball
    const int patterns = 1 << k;
    for (int mask = 0; mask < patterns && property; ++mask) {
      Vec c(nvars, 0.0);
      for (int t = 0; t < k; ++t) {
        const double sign = (mask >> t) & 1 ? -1.0 : 1.0;
        c[sup[t]] = -sign;      // maximize sign * h = minimize -sign * h
        c[p + sup[t]] = sign;
      }
      const lp::Result res = lp::solve_standard_form(lp_a, lp_b, c);
      if (res.status != lp::Status::Optimal)
        throw numeric_error("nsp_verify: inner LP did not reach optimality");
      alpha_s = std::max(alpha_s, -res.objective);
    }
    if (2.0 * alpha_s - 1.0 >= -1e-10) property = false;
  });
  return property;
}

enum class SharpnessStatus { Sharp, Conjectured };

struct DeltaStar {
  double value = 0.0;
  SharpnessStatus status = SharpnessStatus::Sharp;
};

// Sharp recovery threshold delta*(t): 1/3 at t = 1 and sqrt((t-1)/t) for
// t >= 4/3 are proven; the value t/(4-t) on the rest of (0, 4/3) is a
// conjecture and is flagged as such.
inline DeltaStar delta_star(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("delta_star: t must be positive");
  if (t >= 4.0 / 3.0) return {std::sqrt(1.0 - 1.0 / t), SharpnessStatus::Sharp};
  if (t == 1.0) return {1.0 / 3.0, SharpnessStatus::Sharp};
  return {t / (4.0 - t), SharpnessStatus::Conjectured};
}

// Sample-size curve n*(t): the leading factor of the measurement count
// needed so that a subgaussian ensemble meets the delta*(t) threshold with
// high probability. Minimal near t = 1.85 where it is about 83.2.
inline double n_star(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("n_star: t must be positive");
  double denom;
  if (t < 4.0 / 3.0) {
    const double u = 4.0 - t;
    denom = t * t / (16.0 * u * u) - t * t * t / (48.0 * u * u * u);
  } else {
    denom = (t - 1.0) / (16.0 * t) -
            std::pow(t - 1.0, 1.5) / (48.0 * std::pow(t, 1.5));
  }
  if (!(denom > 0.0)) throw std::domain_error("n_star: nonpositive denominator");
  return t / denom;
}

// Lower bound on P(delta_m^A < lambda) for the unit-variance subgaussian
// ensembles, evaluated in log space:
//
//     1 - 2 (12 e p / (m lambda))^m exp(-n (lambda^2/16 - lambda^3/48))
//
// The result can be arbitrarily negative (a vacuous bound) and is reported
// as computed; it never exceeds 1.
inline double ric_probability_bound(long n, long p, long m, double lambda) {
  if (m <= 0 || n <= m) throw std::domain_error("ric_probability_bound: need 0 < m < n");
  if (p < 1) throw std::domain_error("ric_probability_bound: need p >= 1");
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::domain_error("ric_probability_bound: need 0 < lambda < 1");
  const double log_term =
      double(m) *
          (std::log(12.0 * std::numbers::e * double(p)) - std::log(double(m) * lambda)) -
      double(n) * (lambda * lambda / 16.0 - lambda * lambda * lambda / 48.0);
  return 1.0 - 2.0 * std::exp(log_term);
}

// delta_{s k} <= (2s - 1) delta_k for real s > 1.
inline double ric_upscale_bound(double delta_k, double s) {
  if (!(delta_k >= 0.0)) throw std::domain_error("ric_upscale_bound: delta_k must be >= 0");
  if (!(s > 1.0)) throw std::domain_error("ric_upscale_bound: s must exceed 1");
  return (2.0 * s - 1.0) * delta_k;
}

enum class GuaranteeRule { SharpHighOrder, EvenTkLowOrder, OddTkLowOrder, None };

struct GuaranteeVerdict {
  bool guaranteed = false;
  GuaranteeRule rule_applied = GuaranteeRule::None;
  double threshold_used = 0.0;
};

// Decides whether delta_tk < (applicable threshold) certifies uniform exact
// recovery of k-sparse signals by equality-constrained l1 minimization.
// "Not guaranteed" means no implemented sufficient condition applies, never
// that recovery is impossible. The range 1 <= t < 4/3 is left undecided on
// purpose: the high-order bound is known not to be sharp there.
inline GuaranteeVerdict guarantee_exact_recovery(double delta_tk, double t, int k) {
  if (!(delta_tk >= 0.0) || !(t > 0.0) || k < 1)
    throw std::domain_error("guarantee_exact_recovery: bad inputs");
  if (t >= 4.0 / 3.0) {
    const double thr = std::sqrt(1.0 - 1.0 / t);
    if (delta_tk < thr) return {true, GuaranteeRule::SharpHighOrder, thr};
    return {false, GuaranteeRule::None, thr};
  }
  if (t < 1.0) {
    const double tk = t * double(k);
    const double rounded = std::round(tk);
    if (std::abs(tk - rounded) <= 1e-9 && rounded >= 1.0) {
      const long tki = long(rounded);
      if (tki % 2 == 0) {
        const double thr = t / (4.0 - t);
        if (delta_tk < thr) return {true, GuaranteeRule::EvenTkLowOrder, thr};
        return {false, GuaranteeRule::None, thr};
      }
      const double root = std::sqrt(t * t - 1.0 / (double(k) * double(k)));
      const double thr = root / (4.0 - 2.0 * t + root);
      if (delta_tk < thr) return {true, GuaranteeRule::OddTkLowOrder, thr};
      return {false, GuaranteeRule::None, thr};
    }
  }
  return {false, GuaranteeRule::None, 0.0};
}

}  // namespace riplab
