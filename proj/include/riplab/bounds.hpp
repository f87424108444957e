#pragma once

#include <cmath>
#include <numbers>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"

namespace riplab {

// Closed-form recovery-error guarantees for the l1 and nuclear-norm
// programs under an isometry constant delta of order t*k (or t*r) below
// sqrt((t-1)/t), t >= 4/3. Every operation rejects inputs at or above the
// threshold instead of clamping: a bound that does not apply is never
// reported. Logarithms are natural throughout.

struct BoundInputs {
  double delta = 0.0;    // isometry constant of order t*k (or t*r)
  double t = 4.0 / 3.0;  // order multiplier, >= 4/3
  double eps = 0.0;      // true noise radius
  double eta = 0.0;      // constraint radius, >= eps
  double tail_l1 = 0.0;  // l1 norm of the best-k-term (or nuclear norm of
                         // the best-rank-r) approximation error of the target
  long k_or_r = 1;       // sparsity or rank
  double sigma = 0.0;    // gaussian noise level
  long n = 2;            // sample count (gaussian variants)
  long p = 2;            // ambient dimension (gaussian variants)
};

enum class BoundKind { L2, DS };

namespace detail {

inline void check_bound_common(const BoundInputs& in) {
  if (!(in.t >= 4.0 / 3.0)) throw std::domain_error("bounds: t must be >= 4/3");
  if (!(in.delta >= 0.0)) throw std::domain_error("bounds: delta must be >= 0");
  const double threshold = std::sqrt(1.0 - 1.0 / in.t);
  if (!(in.delta < threshold))
    throw guarantee_void_error("bounds: delta is at or above sqrt((t-1)/t); "
                               "the guarantee does not apply");
  if (!(in.eps >= 0.0) || !(in.eta >= in.eps))
    throw std::domain_error("bounds: need 0 <= eps <= eta");
  if (!(in.tail_l1 >= 0.0)) throw std::domain_error("bounds: tail norm must be >= 0");
  if (in.k_or_r < 1) throw std::domain_error("bounds: k (or r) must be >= 1");
}

// coefficient on the compressibility term 2*tail/sqrt(k), common to every
// bound in this family
inline double tail_coefficient(double delta, double t) {
  const double d = std::sqrt(1.0 - 1.0 / t);
  const double gap = t * (d - delta);
  return (std::sqrt(2.0) * delta + std::sqrt(gap * delta)) / gap + 1.0;
}

inline double noise_denominator(double delta, double t) {
  return 1.0 - std::sqrt(t / (t - 1.0)) * delta;
}

}  // namespace detail

// Error of the l2-ball-constrained program:
//   sqrt(2(1+delta))/(1 - sqrt(t/(t-1)) delta) * (eps + eta)
//     + (tail coefficient) * 2*tail/sqrt(k).
inline double error_bound_l2(const BoundInputs& in) {
  detail::check_bound_common(in);
  const double noise = std::sqrt(2.0 * (1.0 + in.delta)) /
                       detail::noise_denominator(in.delta, in.t) * (in.eps + in.eta);
  return noise + detail::tail_coefficient(in.delta, in.t) * 2.0 * in.tail_l1 /
                     std::sqrt(double(in.k_or_r));
}

// Error of the Dantzig-constrained program: the noise factor becomes
// sqrt(2 t k), the tail term is unchanged.
inline double error_bound_ds(const BoundInputs& in) {
  detail::check_bound_common(in);
  const double noise = std::sqrt(2.0 * in.t * double(in.k_or_r)) /
                       detail::noise_denominator(in.delta, in.t) * (in.eps + in.eta);
  return noise + detail::tail_coefficient(in.delta, in.t) * 2.0 * in.tail_l1 /
                     std::sqrt(double(in.k_or_r));
}

// Matrix (rank) variants coincide algebraically with the vector bounds with
// r in place of k; the tail is the nuclear norm of the best-rank-r error.
inline double error_bound_matrix(const BoundInputs& in, BoundKind kind) {
  return kind == BoundKind::L2 ? error_bound_l2(in) : error_bound_ds(in);
}

struct GaussianBound {
  double bound = 0.0;
  double probability = 0.0;
};

// Bounds under iid N(0, sigma^2) noise with the matching constraint radii
// folded in. L2 holds with probability 1 - 1/n, DS with probability
// 1 - 1/sqrt(pi log p).
inline GaussianBound gaussian_bound(const BoundInputs& in, BoundKind kind) {
  detail::check_bound_common(in);
  if (!(in.sigma > 0.0)) throw std::domain_error("gaussian_bound: sigma must be positive");
  if (in.n < 2 || in.p < 2) throw std::domain_error("gaussian_bound: need n >= 2, p >= 2");
  const double tail_term = detail::tail_coefficient(in.delta, in.t) * 2.0 *
                           in.tail_l1 / std::sqrt(double(in.k_or_r));
  const double denom = detail::noise_denominator(in.delta, in.t);
  GaussianBound out;
  if (kind == BoundKind::L2) {
    const double radius =
        in.sigma * std::sqrt(double(in.n) +
                             2.0 * std::sqrt(double(in.n) * std::log(double(in.n))));
    out.bound = 2.0 * std::sqrt(2.0 * (1.0 + in.delta)) / denom * radius + tail_term;
    out.probability = 1.0 - 1.0 / double(in.n);
  } else {
    out.bound = 4.0 * std::sqrt(2.0 * in.t) * in.sigma *
                    std::sqrt(double(in.k_or_r) * std::log(double(in.p))) / denom +
                tail_term;
    out.probability = 1.0 - 1.0 / std::sqrt(std::numbers::pi * std::log(double(in.p)));
  }
  return out;
}

// Squared-error oracle bound for the Dantzig program with radius
// 4 sigma sqrt(log p):
//   256 t / (1 - sqrt(t/(t-1)) delta)^2 * log p * sum_i min(beta_i^2, sigma^2).
inline double oracle_bound(double t, double delta, long p, double sigma,
                           const Vec& beta) {
  if (!(t >= 4.0 / 3.0)) throw std::domain_error("oracle_bound: t must be >= 4/3");
  if (!(delta >= 0.0)) throw std::domain_error("oracle_bound: delta must be >= 0");
  if (!(delta < std::sqrt(1.0 - 1.0 / t)))
    throw guarantee_void_error("oracle_bound: delta is at or above the threshold");
  if (p < 2) throw std::domain_error("oracle_bound: need p >= 2");
  if (!(sigma >= 0.0)) throw std::domain_error("oracle_bound: sigma must be >= 0");
  const double denom = detail::noise_denominator(delta, t);
  double risk = 0.0;
  for (double b : beta) risk += std::min(b * b, sigma * sigma);
  return 256.0 * t / (denom * denom) * std::log(double(p)) * risk;
}

}  // namespace riplab
