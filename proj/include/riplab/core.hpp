#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "riplab/errors.hpp"

namespace riplab {

using Vec = std::vector<double>;

// Dense row-major matrix. Small and value-semantic; all algorithms in this
// library run at desk scale, so no view/expression machinery.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c), 0.0) {}

  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline bool all_finite(const Mat& m) {
  for (double x : m.a)
    if (!std::isfinite(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Vector and matrix arithmetic

inline Vec matvec(const Mat& m, const Vec& x) {
  Vec y(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    const double* row = &m.a[std::size_t(i) * m.cols];
    for (int j = 0; j < m.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

// m^T x
inline Vec matvec_t(const Mat& m, const Vec& x) {
  Vec y(m.cols, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    const double* row = &m.a[std::size_t(i) * m.cols];
    for (int j = 0; j < m.cols; ++j) y[j] += row[j] * x[i];
  }
  return y;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Vec axpy(double alpha, const Vec& x, const Vec& y) {
  Vec z(y);
  for (std::size_t i = 0; i < x.size(); ++i) z[i] += alpha * x[i];
  return z;
}

inline Vec scaled(const Vec& x, double alpha) {
  Vec z(x);
  for (double& v : z) v *= alpha;
  return z;
}

inline Vec sub(const Vec& x, const Vec& y) {
  Vec z(x);
  for (std::size_t i = 0; i < y.size(); ++i) z[i] -= y[i];
  return z;
}

// Columns of `m` restricted to `idx` (sorted or not; taken as given).
inline Mat submatrix_cols(const Mat& m, const std::vector<int>& idx) {
  Mat s(m.rows, int(idx.size()));
  for (int i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s(i, int(j)) = m(i, idx[j]);
  return s;
}

inline Mat gram(const Mat& m) {
  Mat g(m.cols, m.cols);
  for (int i = 0; i < m.cols; ++i)
    for (int j = i; j < m.cols; ++j) {
      double s = 0.0;
      for (int r = 0; r < m.rows; ++r) s += m(r, i) * m(r, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

// ---------------------------------------------------------------------------
// Norms and truncations

enum class Norm { L0, L1, L2, Linf };

// L0 counts entries that are exactly nonzero; callers wanting a tolerance
// must threshold first.
inline double norm(const Vec& v, Norm which) {
  switch (which) {
    case Norm::L0: {
      std::size_t c = 0;
      for (double x : v) c += (x != 0.0);
      return double(c);
    }
    case Norm::L1: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case Norm::L2: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case Norm::Linf: {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    }
  }
  return 0.0;
}

inline double norm_l0(const Vec& v) { return norm(v, Norm::L0); }
inline double norm_l1(const Vec& v) { return norm(v, Norm::L1); }
inline double norm_l2(const Vec& v) { return norm(v, Norm::L2); }
inline double norm_linf(const Vec& v) { return norm(v, Norm::Linf); }

inline double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

struct Truncation {
  Vec head;
  Vec tail;
};

// Keeps the k largest-magnitude entries in `head`, the rest in `tail`.
// head + tail == v holds exactly and the supports are disjoint. Magnitude
// ties break toward the lowest index so the output is deterministic.
inline Truncation top_k_truncate(const Vec& v, int k) {
  const int p = int(v.size());
  if (k < 0 || k > p) throw std::out_of_range("top_k_truncate: k out of [0, p]");
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const double ai = std::abs(v[i]), aj = std::abs(v[j]);
    return ai != aj ? ai > aj : i < j;
  });
  Truncation t{Vec(p, 0.0), v};
  for (int r = 0; r < k; ++r) {
    t.head[order[r]] = v[order[r]];
    t.tail[order[r]] = 0.0;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition (cyclic Jacobi)

struct SymEig {
  Vec values;   // ascending
  Mat vectors;  // column i pairs with values[i]; empty unless requested
};

namespace detail {

// Cyclic Jacobi sweeps; rotation threshold 1e-12 relative to the diagonal
// scale, capped at 100 sweeps. `s` is destroyed.
inline SymEig jacobi_symmetric(Mat s, bool want_vectors) {
  const int n = s.rows;
  Mat v;
  if (want_vectors) v = Mat::identity(n);
  if (n == 0) return {Vec{}, v};

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(s(i, j)));
  const double thresh = 1e-12 * std::max(scale, 1e-300);

  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double apq = s(i, j);
        if (std::abs(apq) <= thresh) continue;
        converged = false;
        const double app = s(i, i), aqq = s(j, j);
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (int r = 0; r < n; ++r) {
          const double sri = s(r, i), srj = s(r, j);
          s(r, i) = c * sri - sn * srj;
          s(r, j) = sn * sri + c * srj;
        }
        for (int r = 0; r < n; ++r) {
          const double sir = s(i, r), sjr = s(j, r);
          s(i, r) = c * sir - sn * sjr;
          s(j, r) = sn * sir + c * sjr;
        }
        if (want_vectors) {
          for (int r = 0; r < n; ++r) {
            const double vri = v(r, i), vrj = v(r, j);
            v(r, i) = c * vri - sn * vrj;
            v(r, j) = sn * vri + c * vrj;
          }
        }
      }
    }
  }
  if (!converged) throw numeric_error("jacobi_symmetric: no convergence in 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return s(a, a) < s(b, b); });
  SymEig out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = s(order[i], order[i]);
  if (want_vectors) {
    out.vectors = Mat(n, n);
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r) out.vectors(r, i) = v(r, order[i]);
  }
  return out;
}

}  // namespace detail

inline Vec symmetric_eigenvalues(const Mat& s) {
  return detail::jacobi_symmetric(s, false).values;
}

inline SymEig symmetric_eigen(const Mat& s) {
  return detail::jacobi_symmetric(s, true);
}

// ---------------------------------------------------------------------------
// Singular value decomposition (one-sided Jacobi)

struct Svd {
  Mat u;  // rows x r, orthonormal columns
  Vec s;  // descending, nonnegative, length r = min(rows, cols)
  Mat v;  // cols x r, orthonormal columns
};

namespace detail {

// Orthogonalizes column pairs until every normalized inner product falls
// below 1e-12; capped at 100 sweeps. Expects rows >= cols.
inline Svd one_sided_jacobi(Mat w) {
  const int m = w.rows, n = w.cols;
  Mat v = Mat::identity(n);

  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int r = 0; r < m; ++r) {
          alpha += w(r, i) * w(r, i);
          beta += w(r, j) * w(r, j);
          gamma += w(r, i) * w(r, j);
        }
        const double denom = std::sqrt(alpha * beta);
        if (denom == 0.0 || std::abs(gamma) <= 1e-12 * denom) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (int r = 0; r < m; ++r) {
          const double wri = w(r, i), wrj = w(r, j);
          w(r, i) = c * wri - sn * wrj;
          w(r, j) = sn * wri + c * wrj;
        }
        for (int r = 0; r < n; ++r) {
          const double vri = v(r, i), vrj = v(r, j);
          v(r, i) = c * vri - sn * vrj;
          v(r, j) = sn * vri + c * vrj;
        }
      }
    }
  }
  if (!converged) throw numeric_error("svd: no convergence in 100 sweeps");

  Vec s(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double nj = 0.0;
    for (int r = 0; r < m; ++r) nj += w(r, j) * w(r, j);
    s[j] = std::sqrt(nj);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return s[a] != s[b] ? s[a] > s[b] : a < b;
  });

  Svd out;
  out.s.resize(n);
  out.u = Mat(m, n);
  out.v = Mat(n, n);
  double smax = 0.0;
  for (int jj = 0; jj < n; ++jj) smax = std::max(smax, s[order[jj]]);
  const double rank_tol = smax * 1e-14 * std::max(m, n);
  int filled = 0;
  for (int jj = 0; jj < n; ++jj) {
    const int src = order[jj];
    out.s[jj] = s[src];
    for (int r = 0; r < n; ++r) out.v(r, jj) = v(r, src);
    if (s[src] > rank_tol && s[src] > 0.0) {
      for (int r = 0; r < m; ++r) out.u(r, jj) = w(r, src) / s[src];
      ++filled;
    }
  }
  // Numerically-zero singular values leave U columns undetermined; complete
  // them to an orthonormal set from coordinate directions.
  for (int jj = filled; jj < n; ++jj) {
    for (int cand = 0; cand < m; ++cand) {
      Vec col(m, 0.0);
      col[cand] = 1.0;
      for (int prev = 0; prev < jj; ++prev) {
        double proj = 0.0;
        for (int r = 0; r < m; ++r) proj += out.u(r, prev) * col[r];
        for (int r = 0; r < m; ++r) col[r] -= proj * out.u(r, prev);
      }
      const double nn = std::sqrt(dot(col, col));
      if (nn > 0.5) {
        for (int r = 0; r < m; ++r) out.u(r, jj) = col[r] / nn;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

// Thin SVD, x = u * diag(s) * v^T with s descending.
inline Svd svd(const Mat& x) {
  if (x.rows >= x.cols) return detail::one_sided_jacobi(x);
  Svd t = detail::one_sided_jacobi(transpose(x));
  return {std::move(t.v), std::move(t.s), std::move(t.u)};
}

struct MatTruncation {
  Mat head;
  Mat tail;
};

// Best rank-r approximation (from the SVD) and its exact complement.
inline MatTruncation rank_r_truncate(const Mat& x, int r) {
  const int rmax = std::min(x.rows, x.cols);
  if (r < 0 || r > rmax) throw std::out_of_range("rank_r_truncate: r out of [0, min(m,n)]");
  const Svd f = svd(x);
  Mat head(x.rows, x.cols);
  for (int k = 0; k < r; ++k) {
    if (f.s[k] == 0.0) break;
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < x.cols; ++j) head(i, j) += f.s[k] * f.u(i, k) * f.v(j, k);
  }
  Mat tail(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) tail.a[i] = x.a[i] - head.a[i];
  return {std::move(head), std::move(tail)};
}

inline double nuclear_norm(const Mat& x) {
  const Svd f = svd(x);
  double s = 0.0;
  for (double a : f.s) s += a;
  return s;
}

inline double spectral_norm_exact(const Mat& x) {
  const Svd f = svd(x);
  return f.s.empty() ? 0.0 : f.s[0];
}

// ---------------------------------------------------------------------------
// Cholesky (used by the generalized eigen-steps in sampled isometry search)

// s = l * l^T for symmetric positive definite s; lower triangle returned.
inline Mat cholesky(const Mat& s) {
  const int n = s.rows;
  Mat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = s(i, j);
      for (int k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        if (sum <= 0.0) throw numeric_error("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

inline Vec forward_solve(const Mat& l, const Vec& b) {
  const int n = l.rows;
  Vec x(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

inline Vec backward_solve_t(const Mat& l, const Vec& b) {
  const int n = l.rows;
  Vec x(b);
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Problem containers

// Support of a vector: strictly increasing indices.
using SupportSet = std::vector<int>;

inline SupportSet support_of(const Vec& v) {
  SupportSet s;
  for (int i = 0; i < int(v.size()); ++i)
    if (v[i] != 0.0) s.push_back(i);
  return s;
}

struct ConstraintSet {
  enum class Kind { Zero, L2Ball, DantzigBall };

  Kind kind = Kind::Zero;
  double radius = 0.0;

  static ConstraintSet zero() { return {Kind::Zero, 0.0}; }
  static ConstraintSet l2_ball(double eta) {
    require_radius(eta);
    return {Kind::L2Ball, eta};
  }
  static ConstraintSet dantzig_ball(double eta) {
    require_radius(eta);
    return {Kind::DantzigBall, eta};
  }

 private:
  static void require_radius(double eta) {
    if (!(eta >= 0.0) || !std::isfinite(eta))
      throw std::domain_error("constraint radius must be finite and nonnegative");
  }
};

struct RecoveryProblem {
  Mat a;
  Vec y;
  ConstraintSet constraint;
};

inline void validate(const RecoveryProblem& p) {
  if (p.a.rows < 1 || p.a.cols < 1) throw std::domain_error("empty measurement matrix");
  if (int(p.y.size()) != p.a.rows) throw std::domain_error("observation length mismatch");
  if (!all_finite(p.a) || !all_finite(p.y)) throw std::domain_error("non-finite problem data");
}

// Linear map from m x n matrices to R^q, stored against column-major
// vectorization of the domain.
struct LinearMap {
  Mat matrix;  // q x (m*n)
  int m = 0;
  int n = 0;

  int q() const { return matrix.rows; }

  Vec apply(const Mat& x) const { return matvec(matrix, vec_cm(x)); }
  Mat apply_adjoint(const Vec& z) const { return unvec_cm(matvec_t(matrix, z), m, n); }

  static Vec vec_cm(const Mat& x) {
    Vec v(std::size_t(x.rows) * x.cols);
    std::size_t k = 0;
    for (int j = 0; j < x.cols; ++j)
      for (int i = 0; i < x.rows; ++i) v[k++] = x(i, j);
    return v;
  }

  static Mat unvec_cm(const Vec& v, int m, int n) {
    Mat x(m, n);
    std::size_t k = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) x(i, j) = v[k++];
    return x;
  }
};

struct ArmpProblem {
  LinearMap map;
  Vec b;
  ConstraintSet constraint;
};

inline void validate(const ArmpProblem& p) {
  if (p.map.m < 1 || p.map.n < 1) throw std::domain_error("empty map domain");
  if (p.map.matrix.cols != p.map.m * p.map.n)
    throw std::domain_error("map column count does not match domain shape");
  if (int(p.b.size()) != p.map.q()) throw std::domain_error("observation length mismatch");
  if (!all_finite(p.map.matrix) || !all_finite(p.b))
    throw std::domain_error("non-finite problem data");
}

}  // namespace riplab
