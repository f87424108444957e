#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"

namespace riplab::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::IterationLimit;
  Vec x;                            // primal solution
  double objective = 0.0;           // c'x
  Vec y;                            // dual vector for the equality constraints
  double duality_gap = 0.0;         // |c'x - b'y|
  double dual_infeasibility = 0.0;  // max(0, max_j (A'y - c)_j)
  Vec farkas;                       // when Infeasible: A'f <= 0, b'f > 0
  int iterations = 0;
};

// Dense two-phase tableau simplex for
//
//     min c'x   subject to   A x = b,  x >= 0.
//
// Dantzig pricing with a switch to Bland's rule after a pivot budget, which
// guarantees termination on degenerate instances. The returned dual vector
// and duality gap certify optimality; an infeasible system yields a Farkas
// ray instead. Redundant equality rows (rank-deficient A) are tolerated.
class Simplex {
 public:
  static constexpr double kPivotTol = 1e-11;
  static constexpr double kReducedCostTol = 1e-9;

  Simplex(const Mat& a, const Vec& b, const Vec& c)
      : m_(a.rows), n_(a.cols), width_(a.cols + a.rows), cost_(c), flip_(m_, 1.0),
        basis_(m_), tab_(m_, a.cols + a.rows), rhs_(m_) {
    // tableau columns: n structural + m artificial; the artificial block is
    // initialized to the identity and therefore always holds B^{-1}
    for (int i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      flip_[i] = sign;
      rhs_[i] = sign * b[i];
      for (int j = 0; j < n_; ++j) tab_(i, j) = sign * a(i, j);
      tab_(i, n_ + i) = 1.0;
      basis_[i] = n_ + i;
    }
    b0_ = rhs_;
  }

  Result run(int max_iter) {
    Result res;
    int used = 0;

    // phase 1: drive the artificial objective to zero
    Vec phase1_cost(width_, 0.0);
    for (int i = 0; i < m_; ++i) phase1_cost[n_ + i] = 1.0;
    price(phase1_cost);
    if (!iterate(phase1_cost, /*allow_artificial=*/true, max_iter, used)) {
      res.status = Status::IterationLimit;
      res.iterations = used;
      return res;
    }
    res.iterations = used;
    if (objective_ > 1e-8 * std::max(1.0, rhs_scale_)) {
      res.status = Status::Infeasible;
      Vec f = dual_vector(phase1_cost);
      // the phase-1 dual is a Farkas ray once the row sign flips are undone
      for (int i = 0; i < m_; ++i) f[i] *= flip_[i];
      res.farkas = std::move(f);
      return res;
    }
    drive_out_artificials();

    // phase 2 on the real objective
    Vec phase2_cost(width_, 0.0);
    for (int j = 0; j < n_; ++j) phase2_cost[j] = cost_[j];
    price(phase2_cost);
    if (!iterate(phase2_cost, /*allow_artificial=*/false, max_iter, used)) {
      res.status = unbounded_ ? Status::Unbounded : Status::IterationLimit;
      res.iterations = used;
      return res;
    }
    res.iterations = used;

    res.status = Status::Optimal;
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) res.x[basis_[i]] = rhs_[i];
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.x[j];

    const Vec y = dual_vector(phase2_cost);
    double by = 0.0;
    for (int i = 0; i < m_; ++i) by += y[i] * b0_[i];
    res.duality_gap = std::abs(res.objective - by);
    res.dual_infeasibility = 0.0;
    for (int j = 0; j < n_; ++j) {
      // reduced costs at optimality certify A'y <= c
      res.dual_infeasibility = std::max(res.dual_infeasibility, -red_[j]);
    }
    res.y.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) res.y[i] = y[i] * flip_[i];
    return res;
  }

 private:
  void price(const Vec& cost) {
    red_.assign(width_, 0.0);
    objective_ = 0.0;
    Vec cb(m_);
    for (int i = 0; i < m_; ++i) {
      cb[i] = cost[basis_[i]];
      objective_ += cb[i] * rhs_[i];
    }
    for (int j = 0; j < width_; ++j) {
      double z = 0.0;
      for (int i = 0; i < m_; ++i) z += cb[i] * tab_(i, j);
      red_[j] = cost[j] - z;
    }
    rhs_scale_ = 0.0;
    for (double r : rhs_) rhs_scale_ = std::max(rhs_scale_, std::abs(r));
  }

  bool iterate(const Vec& cost, bool allow_artificial, int max_iter, int& used) {
    unbounded_ = false;
    const int bland_after = 5000;
    int local = 0;
    const int limit = allow_artificial ? width_ : n_;
    while (true) {
      if (used >= max_iter) return false;
      const bool bland = local >= bland_after;
      int enter = -1;
      double best = -kReducedCostTol;
      for (int j = 0; j < limit; ++j) {
        if (red_[j] < (bland ? -kReducedCostTol : best)) {
          enter = j;
          if (bland) break;
          best = red_[j];
        }
      }
      if (enter < 0) return true;  // optimal for this phase

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double piv = tab_(i, enter);
        if (piv <= kPivotTol) continue;
        const double r = rhs_[i] / piv;
        if (r < ratio - 1e-12 ||
            (r <= ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
          ratio = std::min(ratio, r);
          leave = i;
        }
      }
      if (leave < 0) {
        unbounded_ = true;
        return false;
      }
      pivot(leave, enter, cost);
      ++used;
      ++local;
    }
  }

  void pivot(int row, int col, const Vec& cost) {
    const double piv = tab_(row, col);
    const double inv = 1.0 / piv;
    for (int j = 0; j < width_; ++j) tab_(row, j) *= inv;
    rhs_[row] *= inv;
    tab_(row, col) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = tab_(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) tab_(i, j) -= f * tab_(row, j);
      tab_(i, col) = 0.0;
      rhs_[i] -= f * rhs_[row];
      if (rhs_[i] < 0.0 && rhs_[i] > -1e-11) rhs_[i] = 0.0;
    }
    const double rf = red_[col];
    if (rf != 0.0) {
      for (int j = 0; j < width_; ++j) red_[j] -= rf * tab_(row, j);
    }
    red_[col] = 0.0;
    basis_[row] = col;
    objective_ = 0.0;
    for (int i = 0; i < m_; ++i) objective_ += cost[basis_[i]] * rhs_[i];
  }

  // After phase 1, swap any artificial still basic (at level zero) for a
  // structural column; rows with no eligible pivot are redundant and keep
  // their artificial basic at zero.
  void drive_out_artificials() {
    const Vec no_cost(width_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(tab_(i, j)) > 1e-9) {
          pivot(i, j, no_cost);
          break;
        }
      }
    }
  }

  // y' = c_B' B^{-1}, read from the artificial block
  Vec dual_vector(const Vec& cost) const {
    Vec y(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int r = 0; r < m_; ++r) s += cost[basis_[r]] * tab_(r, n_ + i);
      y[i] = s;
    }
    return y;
  }

  int m_, n_, width_;
  Vec cost_;
  Vec flip_;
  std::vector<int> basis_;
  Mat tab_;
  Vec rhs_;
  Vec b0_;
  Vec red_;
  double objective_ = 0.0;
  double rhs_scale_ = 0.0;
  bool unbounded_ = false;
};

// min c'x s.t. Ax = b, x >= 0
inline Result solve_standard_form(const Mat& a, const Vec& b, const Vec& c,
                                  int max_iter = 0) {
  Simplex s(a, b, c);
  return s.run(max_iter > 0 ? max_iter : 5000 + 80 * (a.rows + a.cols));
}

}  // namespace riplab::lp
