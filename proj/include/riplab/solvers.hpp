#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"
#include "riplab/lp.hpp"

namespace riplab {

struct SolverOptions {
  double tolerance = 1e-8;
  int max_iterations = 20000;
  std::uint64_t seed = 0;
};

inline void validate(const SolverOptions& o) {
  if (!(o.tolerance > 0.0)) throw std::domain_error("solver tolerance must be positive");
  if (o.max_iterations < 1) throw std::domain_error("max_iterations must be >= 1");
}

struct RecoveryResult {
  Vec estimate;
  double objective = 0.0;           // l1 norm of the estimate
  double constraint_residual = 0.0; // violation of the constraint set
  int iterations = 0;
  bool converged = false;
  double optimality_gap = 0.0;      // duality gap (LP path) or fixed-point
                                    // residual (splitting path)
};

struct MatrixRecoveryResult {
  Mat estimate;
  double nuclear_objective = 0.0;
  double constraint_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double optimality_gap = 0.0;
};

namespace detail {

// ||A||_2 upper estimate by power iteration on A'A with a safety factor.
inline double spectral_norm_estimate(const Mat& a) {
  const int p = a.cols;
  Vec v(p);
  for (int i = 0; i < p; ++i) v[i] = 1.0 + 1e-3 * double(i % 7);
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vec w = matvec_t(a, matvec(a, v));
    const double nn = norm_l2(w);
    if (nn == 0.0) return 0.0;
    for (int i = 0; i < p; ++i) v[i] = w[i] / nn;
    lambda = nn;
  }
  return std::sqrt(lambda) * 1.001;
}

inline Vec soft_threshold(const Vec& v, double tau) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    out[i] = x > tau ? x - tau : (x < -tau ? x + tau : 0.0);
  }
  return out;
}

// min-norm least squares via the SVD; used for feasibility prechecks.
inline Vec least_squares(const Mat& a, const Vec& y) {
  const Svd f = svd(a);
  const double smax = f.s.empty() ? 0.0 : f.s.front();
  const double tol = smax * 1e-12;
  Vec x(a.cols, 0.0);
  for (int k = 0; k < int(f.s.size()); ++k) {
    if (f.s[k] <= tol) continue;
    double uy = 0.0;
    for (int i = 0; i < a.rows; ++i) uy += f.u(i, k) * y[i];
    const double coef = uy / f.s[k];
    for (int j = 0; j < a.cols; ++j) x[j] += coef * f.v(j, k);
  }
  return x;
}

// l1 minimization subject to A b = y as a split-variable LP with the duality
// gap carried through as the optimality certificate.
inline RecoveryResult l1_equality_lp(const Mat& a, const Vec& y,
                                     const SolverOptions& opts) {
  const int n = a.rows, p = a.cols;
  Mat lp_a(n, 2 * p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) {
      lp_a(i, j) = a(i, j);
      lp_a(i, p + j) = -a(i, j);
    }
  const Vec c(2 * p, 1.0);
  const lp::Result res = lp::solve_standard_form(lp_a, y, c);
  if (res.status == lp::Status::Infeasible)
    throw infeasible_error("l1_min: A b = y has no solution", res.farkas);
  if (res.status == lp::Status::Unbounded)
    throw numeric_error("l1_min: equality LP reported unbounded");

  RecoveryResult out;
  out.estimate.assign(p, 0.0);
  if (res.status == lp::Status::Optimal)
    for (int j = 0; j < p; ++j) out.estimate[j] = res.x[j] - res.x[p + j];
  out.objective = norm_l1(out.estimate);
  out.iterations = res.iterations;
  out.constraint_residual = norm_l2(sub(matvec(a, out.estimate), y));
  out.optimality_gap = std::max(res.duality_gap, res.dual_infeasibility);
  out.converged = res.status == lp::Status::Optimal &&
                  out.optimality_gap <= opts.tolerance &&
                  out.constraint_residual <= opts.tolerance;
  return out;
}

// l1 minimization subject to ||A'(A b - y)||_inf <= eta, as an LP over
// [b+, b-, s, s'] with two slack blocks for the two-sided bound.
inline RecoveryResult l1_dantzig_lp(const Mat& a, const Vec& y, double eta,
                                    const SolverOptions& opts) {
  const int p = a.cols;
  const Mat g = gram(a);
  const Vec d = matvec_t(a, y);
  const int rows = 2 * p, cols = 4 * p;
  Mat lp_a(rows, cols);
  Vec lp_b(rows, 0.0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      lp_a(i, j) = g(i, j);
      lp_a(i, p + j) = -g(i, j);
      lp_a(p + i, j) = -g(i, j);
      lp_a(p + i, p + j) = g(i, j);
    }
    lp_a(i, 2 * p + i) = 1.0;
    lp_a(p + i, 3 * p + i) = 1.0;
    lp_b[i] = d[i] + eta;
    lp_b[p + i] = eta - d[i];
  }
  Vec c(cols, 0.0);
  for (int j = 0; j < 2 * p; ++j) c[j] = 1.0;
  const lp::Result res = lp::solve_standard_form(lp_a, lp_b, c);
  if (res.status == lp::Status::Infeasible)
    throw infeasible_error("l1_min: Dantzig constraint is empty", res.farkas);
  if (res.status == lp::Status::Unbounded)
    throw numeric_error("l1_min: Dantzig LP reported unbounded");

  RecoveryResult out;
  out.estimate.assign(p, 0.0);
  if (res.status == lp::Status::Optimal)
    for (int j = 0; j < p; ++j) out.estimate[j] = res.x[j] - res.x[p + j];
  out.objective = norm_l1(out.estimate);
  out.iterations = res.iterations;
  const Vec corr = matvec_t(a, sub(matvec(a, out.estimate), y));
  out.constraint_residual = std::max(0.0, norm_linf(corr) - eta);
  out.optimality_gap = std::max(res.duality_gap, res.dual_infeasibility);
  out.converged = res.status == lp::Status::Optimal &&
                  out.optimality_gap <= opts.tolerance &&
                  out.constraint_residual <= opts.tolerance;
  return out;
}

// l1 minimization subject to ||A b - y||_2 <= eta by a primal-dual splitting
// iteration: an l1 proximal step against the adjoint image of the dual
// variable, and a dual step that projects residuals onto the l2 ball. Step
// sizes sigma = tau = 1/||A||_2 keep the scheme unconditionally convergent;
// the fixed-point residual is the optimality certificate.
inline RecoveryResult l1_l2ball_splitting(const Mat& a, const Vec& y, double eta,
                                          const SolverOptions& opts) {
  const int n = a.rows, p = a.cols;

  {  // infeasibility precheck: distance from y to the range of A
    const Vec ls = least_squares(a, y);
    const Vec resid = sub(matvec(a, ls), y);
    const double dist = norm_l2(resid);
    if (dist > eta * (1.0 + 1e-9) + 1e-12)
      throw infeasible_error("l1_min: l2 ball does not meet the range of A", resid);
  }

  const double opnorm = spectral_norm_estimate(a);
  if (opnorm == 0.0) {
    // zero operator: feasibility was already checked, so 0 is optimal
    RecoveryResult out;
    out.estimate.assign(p, 0.0);
    out.converged = true;
    return out;
  }
  const double tau = 1.0 / opnorm, sigma = 1.0 / opnorm;

  auto project_ball = [&](const Vec& w) {
    Vec d = sub(w, y);
    const double nd = norm_l2(d);
    if (nd <= eta) return w;
    const double f = eta / nd;
    Vec out(y);
    for (int i = 0; i < n; ++i) out[i] += f * d[i];
    return out;
  };

  Vec beta(p, 0.0), beta_bar(p, 0.0), z(n, 0.0);
  const double scale = std::max(1.0, norm_l2(y));
  RecoveryResult out;
  int it = 0;
  double fp_resid = std::numeric_limits<double>::infinity();
  for (; it < opts.max_iterations; ++it) {
    // dual ascent on the ball indicator via its proximal conjugate
    Vec w = axpy(sigma, matvec(a, beta_bar), z);
    Vec w_scaled(w);
    for (double& x : w_scaled) x /= sigma;
    const Vec proj = project_ball(w_scaled);
    Vec z_next(n);
    for (int i = 0; i < n; ++i) z_next[i] = w[i] - sigma * proj[i];

    const Vec grad = matvec_t(a, z_next);
    Vec beta_next = soft_threshold(axpy(-tau, grad, beta), tau);
    for (int i = 0; i < p; ++i) beta_bar[i] = 2.0 * beta_next[i] - beta[i];

    double dp = 0.0, dd = 0.0;
    for (int i = 0; i < p; ++i) dp = std::max(dp, std::abs(beta_next[i] - beta[i]));
    for (int i = 0; i < n; ++i) dd = std::max(dd, std::abs(z_next[i] - z[i]));
    fp_resid = dp / tau + dd / sigma;
    beta = std::move(beta_next);
    z = std::move(z_next);
    if (fp_resid <= opts.tolerance * scale) {
      ++it;
      break;
    }
  }
  out.estimate = beta;
  out.objective = norm_l1(beta);
  out.iterations = it;
  out.constraint_residual = std::max(0.0, norm_l2(sub(matvec(a, beta), y)) - eta);
  out.optimality_gap = fp_resid;
  out.converged = fp_resid <= opts.tolerance * scale &&
                  out.constraint_residual <= opts.tolerance * scale;
  return out;
}

}  // namespace detail

// Constrained l1 minimization: min ||b||_1 subject to A b - y in B, where B
// is {0}, an l2 ball, or the Dantzig correlation ball. Equality and Dantzig
// constraints go through an LP with a duality-gap certificate; the l2 ball
// uses operator splitting with a fixed-point certificate. Never returns a
// silently non-optimal answer: failure to converge is reported in the result.
inline RecoveryResult l1_min(const RecoveryProblem& problem,
                             const SolverOptions& opts = {}) {
  validate(problem);
  validate(opts);
  switch (problem.constraint.kind) {
    case ConstraintSet::Kind::Zero:
      return detail::l1_equality_lp(problem.a, problem.y, opts);
    case ConstraintSet::Kind::DantzigBall:
      return detail::l1_dantzig_lp(problem.a, problem.y, problem.constraint.radius, opts);
    case ConstraintSet::Kind::L2Ball:
      return detail::l1_l2ball_splitting(problem.a, problem.y,
                                         problem.constraint.radius, opts);
  }
  throw std::domain_error("l1_min: unknown constraint kind");
}

namespace detail {

// Soft-thresholds the singular values; the proximal map of the nuclear norm.
inline Mat singular_value_threshold(const Mat& x, double tau) {
  const Svd f = svd(x);
  Mat out(x.rows, x.cols);
  for (int k = 0; k < int(f.s.size()); ++k) {
    const double s = f.s[k] - tau;
    if (s <= 0.0) break;
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < x.cols; ++j) out(i, j) += s * f.u(i, k) * f.v(j, k);
  }
  return out;
}

// Projects onto { z : ||z - center||_spectral <= eta } by clipping singular
// values of the offset.
inline Mat project_spectral_ball(const Mat& w, const Mat& center, double eta) {
  Mat d(w.rows, w.cols);
  for (std::size_t i = 0; i < w.a.size(); ++i) d.a[i] = w.a[i] - center.a[i];
  const Svd f = svd(d);
  if (f.s.empty() || f.s.front() <= eta) return w;
  Mat out(center);
  for (int k = 0; k < int(f.s.size()); ++k) {
    const double s = std::min(f.s[k], eta);
    if (s <= 0.0) break;
    for (int i = 0; i < w.rows; ++i)
      for (int j = 0; j < w.cols; ++j) out(i, j) += s * f.u(i, k) * f.v(j, k);
  }
  return out;
}

}  // namespace detail

// Constrained nuclear norm minimization: min ||X||_* subject to M(X) - b in
// B. All three constraint kinds run through the same splitting scheme whose
// proximal step is singular-value soft-thresholding; the Dantzig variant
// constrains the spectral norm of M*(M(X) - b).
inline MatrixRecoveryResult nuclear_min(const ArmpProblem& problem,
                                        const SolverOptions& opts = {}) {
  validate(problem);
  validate(opts);
  const int m = problem.map.m, n = problem.map.n;
  const auto kind = problem.constraint.kind;
  const double eta = problem.constraint.radius;

  // operator K acting on vec(X) and the projection of K(X) onto the target
  Mat k_op;
  std::function<Vec(const Vec&)> project;
  if (kind == ConstraintSet::Kind::DantzigBall) {
    k_op = matmul(transpose(problem.map.matrix), problem.map.matrix);
    const Mat center = problem.map.apply_adjoint(problem.b);
    project = [m, n, eta, center](const Vec& w) {
      const Mat shaped = LinearMap::unvec_cm(w, m, n);
      return LinearMap::vec_cm(detail::project_spectral_ball(shaped, center, eta));
    };
  } else {
    k_op = problem.map.matrix;
    const Vec b = problem.b;
    const double radius = kind == ConstraintSet::Kind::Zero ? 0.0 : eta;
    project = [b, radius](const Vec& w) {
      Vec d = sub(w, b);
      const double nd = norm_l2(d);
      if (nd <= radius) return w;
      const double f = radius == 0.0 ? 0.0 : radius / nd;
      Vec out(b);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += f * d[i];
      return out;
    };
  }

  const double opnorm = detail::spectral_norm_estimate(k_op);
  const double tau = opnorm > 0.0 ? 1.0 / opnorm : 1.0;
  const double sigma = tau;

  Mat x(m, n), x_bar(m, n);
  Vec z(k_op.rows, 0.0);
  const double scale = std::max(1.0, norm_l2(problem.b));
  double fp_resid = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Vec w = axpy(sigma, matvec(k_op, LinearMap::vec_cm(x_bar)), z);
    Vec w_scaled(w);
    for (double& v : w_scaled) v /= sigma;
    const Vec proj = project(w_scaled);
    Vec z_next(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) z_next[i] = w[i] - sigma * proj[i];

    const Vec grad = matvec_t(k_op, z_next);
    Mat step(m, n);
    const Vec xv = LinearMap::vec_cm(x);
    Vec stepped(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) stepped[i] = xv[i] - tau * grad[i];
    const Mat x_next = detail::singular_value_threshold(
        LinearMap::unvec_cm(stepped, m, n), tau);

    double dp = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i)
      dp = std::max(dp, std::abs(x_next.a[i] - x.a[i]));
    for (std::size_t i = 0; i < z.size(); ++i)
      dd = std::max(dd, std::abs(z_next[i] - z[i]));
    fp_resid = dp / tau + dd / sigma;
    for (std::size_t i = 0; i < x.a.size(); ++i)
      x_bar.a[i] = 2.0 * x_next.a[i] - x.a[i];
    x = x_next;
    z = std::move(z_next);
    if (fp_resid <= opts.tolerance * scale) {
      ++it;
      break;
    }
  }

  MatrixRecoveryResult out;
  out.estimate = x;
  out.nuclear_objective = nuclear_norm(x);
  out.iterations = it;
  const Vec img_resid = sub(problem.map.apply(x), problem.b);
  switch (kind) {
    case ConstraintSet::Kind::Zero:
      out.constraint_residual = norm_l2(img_resid);
      break;
    case ConstraintSet::Kind::L2Ball:
      out.constraint_residual = std::max(0.0, norm_l2(img_resid) - eta);
      break;
    case ConstraintSet::Kind::DantzigBall:
      out.constraint_residual = std::max(
          0.0, spectral_norm_exact(problem.map.apply_adjoint(img_resid)) - eta);
      break;
  }
  out.optimality_gap = fp_resid;
  out.converged = fp_resid <= opts.tolerance * scale &&
                  out.constraint_residual <= opts.tolerance * scale;
  return out;
}

struct GaussianRadii {
  double eta_l2 = 0.0;
  double eta_ds = 0.0;
};

// Constraint radii under which iid N(0, sigma^2) noise is captured with the
// stated probabilities: sigma*sqrt(n + 2 sqrt(n log n)) for the l2 ball and
// 2*sigma*sqrt(log p) for the Dantzig ball. Logarithms are natural.
inline GaussianRadii gaussian_radii(double sigma, long n, long p) {
  if (!(sigma > 0.0)) throw std::domain_error("gaussian_radii: sigma must be positive");
  if (n < 2 || p < 2) throw std::domain_error("gaussian_radii: need n >= 2 and p >= 2");
  GaussianRadii r;
  r.eta_l2 = sigma * std::sqrt(double(n) + 2.0 * std::sqrt(double(n) * std::log(double(n))));
  r.eta_ds = 2.0 * sigma * std::sqrt(std::log(double(p)));
  return r;
}

}  // namespace riplab
