// Test-side oracles, deliberately routed through Eigen so the checks stay
// independent of the library's own Jacobi kernels.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/rng.hpp"

namespace oracles {

inline Eigen::MatrixXd to_eigen(const riplab::Mat& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  return e;
}

inline riplab::Mat from_eigen(const Eigen::MatrixXd& e) {
  riplab::Mat m(int(e.rows()), int(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

// Brute-force isometry deviation over all supports of size k.
inline double ric_bruteforce(const riplab::Mat& a, int k) {
  const Eigen::MatrixXd ea = to_eigen(a);
  const int p = a.cols;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  double worst = 0.0;
  while (true) {
    Eigen::MatrixXd sub(ea.rows(), k);
    for (int j = 0; j < k; ++j) sub.col(j) = ea.col(idx[j]);
    const Eigen::MatrixXd g = sub.transpose() * sub;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    worst = std::max({worst, es.eigenvalues().maxCoeff() - 1.0,
                      1.0 - es.eigenvalues().minCoeff()});
    int i = k - 1;
    while (i >= 0 && idx[i] == p - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return worst;
}

// Brute-force restricted orthogonality over disjoint support pairs.
inline double roc_bruteforce(const riplab::Mat& a, int k1, int k2) {
  const Eigen::MatrixXd ea = to_eigen(a);
  const int p = a.cols;
  std::vector<int> s1(k1);
  for (int i = 0; i < k1; ++i) s1[i] = i;
  double worst = 0.0;
  while (true) {
    std::vector<bool> used(p, false);
    for (int i : s1) used[i] = true;
    std::vector<int> rest;
    for (int i = 0; i < p; ++i)
      if (!used[i]) rest.push_back(i);
    std::vector<int> pick(k2);
    for (int i = 0; i < k2; ++i) pick[i] = i;
    while (true) {
      Eigen::MatrixXd cross(k1, k2);
      for (int i = 0; i < k1; ++i)
        for (int j = 0; j < k2; ++j)
          cross(i, j) = ea.col(s1[i]).dot(ea.col(rest[pick[j]]));
      worst = std::max(worst,
                       cross.jacobiSvd().singularValues().maxCoeff());
      int i = k2 - 1;
      const int q = int(rest.size());
      while (i >= 0 && pick[i] == q - k2 + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k2; ++j) pick[j] = pick[j - 1] + 1;
    }
    int i = k1 - 1;
    while (i >= 0 && s1[i] == p - k1 + i) --i;
    if (i < 0) break;
    ++s1[i];
    for (int j = i + 1; j < k1; ++j) s1[j] = s1[j - 1] + 1;
  }
  return worst;
}

inline riplab::Mat random_matrix(int rows, int cols, riplab::Rng& rng,
                                 double scale = 1.0) {
  riplab::Mat m(rows, cols);
  for (double& v : m.a) v = scale * rng.next_gaussian();
  return m;
}

inline riplab::Vec random_vector(int n, riplab::Rng& rng) {
  riplab::Vec v(n);
  for (double& x : v) x = rng.next_gaussian();
  return v;
}

// Random matrix with orthonormal columns (rows >= cols).
inline riplab::Mat random_orthonormal(int rows, int cols, riplab::Rng& rng) {
  const Eigen::MatrixXd g = to_eigen(random_matrix(rows, cols, rng));
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  return from_eigen(q);
}

// Unit-norm frame with near-minimal coherence by alternating projection
// between the clipped Gram and the rank-n positive cone. At (n, p) around
// (12, 16) this lands well below the order-4 isometry threshold sqrt(1/2),
// which random gaussian matrices of that size never meet.
inline riplab::Mat low_coherence_frame(int n, int p, std::uint64_t seed,
                                       int iters = 400) {
  riplab::Rng rng(seed);
  Eigen::MatrixXd a = to_eigen(random_matrix(n, p, rng));
  for (int j = 0; j < p; ++j) a.col(j).normalize();
  const double mu = std::sqrt(double(p - n) / (double(n) * double(p - 1)));
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd g = a.transpose() * a;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (i != j) g(i, j) = std::clamp(g(i, j), -mu, mu);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    Eigen::MatrixXd next(n, p);
    for (int r = 0; r < n; ++r) {
      const int src = p - 1 - r;
      const double lam = std::max(es.eigenvalues()(src), 0.0);
      next.row(r) = std::sqrt(lam) * es.eigenvectors().col(src).transpose();
    }
    for (int j = 0; j < p; ++j) next.col(j).normalize();
    a = next;
  }
  return from_eigen(a);
}

}  // namespace oracles
