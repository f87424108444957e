#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"
#include "riplab/ric.hpp"
#include "riplab/rng.hpp"
#include "riplab/solvers.hpp"

namespace riplab {

// Seeded experiment drivers: measurement ensembles, recovery phase sweeps,
// and the threshold curves on a grid. Everything here is deterministic under
// a fixed seed; sweep cells derive independent substreams so results do not
// depend on evaluation order.

enum class EnsembleKind { Gaussian, Rademacher, TernarySparse };

struct ExperimentConfig {
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  int n = 1;
  int p = 1;
  int k = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  double success_threshold = 1e-4;
};

inline void validate(const ExperimentConfig& c) {
  if (c.n < 1 || c.p < 1) throw std::domain_error("experiment: dimensions must be positive");
  if (c.k < 0 || c.k > c.p) throw std::domain_error("experiment: k out of [0, p]");
  if (c.trials < 1) throw std::domain_error("experiment: trials must be >= 1");
  if (!(c.success_threshold > 0.0))
    throw std::domain_error("experiment: success threshold must be positive");
}

// n x p random measurement matrix with iid entries of variance 1/n:
// N(0, 1/n), +-1/sqrt(n) with equal odds, or the sparse ternary law
// {+sqrt(3/n): 1/6, 0: 2/3, -sqrt(3/n): 1/6}.
inline Mat make_ensemble(const ExperimentConfig& config) {
  validate(config);
  Rng rng(config.seed);
  Mat a(config.n, config.p);
  const double root_n = std::sqrt(double(config.n));
  switch (config.ensemble) {
    case EnsembleKind::Gaussian:
      for (double& v : a.a) v = rng.next_gaussian() / root_n;
      break;
    case EnsembleKind::Rademacher:
      for (double& v : a.a) v = (rng.next_u64() >> 63 ? -1.0 : 1.0) / root_n;
      break;
    case EnsembleKind::TernarySparse: {
      const double val = std::sqrt(3.0 / double(config.n));
      for (double& v : a.a) {
        const double u = rng.next_double();
        v = u < 1.0 / 6.0 ? val : (u < 1.0 / 3.0 ? -val : 0.0);
      }
      break;
    }
  }
  return a;
}

struct PhaseCell {
  int n = 0;
  int k = 0;
  double success_rate = 0.0;
  double mean_error = 0.0;
};

namespace detail {

inline Vec plant_sparse_signal(int p, int k, Rng& rng) {
  Vec beta(p, 0.0);
  std::vector<int> picked;
  while (int(picked.size()) < k) {
    const int idx = rng.next_below(p);
    bool dup = false;
    for (int q : picked) dup |= (q == idx);
    if (!dup) picked.push_back(idx);
  }
  for (int idx : picked) beta[idx] = rng.next_gaussian();
  return beta;
}

}  // namespace detail

// Noiseless equality-constrained recovery of planted k-sparse gaussian
// signals on an (n, k) grid at fixed p. Success means relative l2 error at
// most the configured threshold. Solver errors inside a cell count as
// failed trials rather than aborting the sweep.
inline std::vector<PhaseCell> phase_sweep(const ExperimentConfig& base,
                                          const std::vector<int>& n_values,
                                          const std::vector<int>& k_values) {
  if (n_values.empty() || k_values.empty())
    throw std::domain_error("phase_sweep: empty grid");
  std::vector<PhaseCell> cells;
  cells.reserve(n_values.size() * k_values.size());
  std::uint64_t cell_index = 0;
  for (int n : n_values) {
    for (int k : k_values) {
      ExperimentConfig cfg = base;
      cfg.n = n;
      cfg.k = k;
      validate(cfg);
      Rng rng(Rng::mix(base.seed, cell_index));
      int successes = 0;
      double error_sum = 0.0;
      int error_count = 0;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        cfg.seed = rng.next_u64();
        const Mat a = make_ensemble(cfg);
        Vec beta0 = detail::plant_sparse_signal(cfg.p, cfg.k, rng);
        const Vec y = matvec(a, beta0);
        double err;
        try {
          const RecoveryResult res = l1_min({a, y, ConstraintSet::zero()});
          const double denom = norm_l2(beta0);
          err = denom > 0.0 ? norm_l2(sub(res.estimate, beta0)) / denom
                            : norm_l2(res.estimate);
        } catch (const std::exception&) {
          continue;  // recorded implicitly: trial neither succeeds nor
                     // contributes to the error mean
        }
        error_sum += err;
        ++error_count;
        if (err <= cfg.success_threshold) ++successes;
      }
      PhaseCell cell;
      cell.n = n;
      cell.k = k;
      cell.success_rate = double(successes) / double(cfg.trials);
      cell.mean_error = error_count > 0 ? error_sum / double(error_count) : 0.0;
      cells.push_back(cell);
      ++cell_index;
    }
  }
  return cells;
}

struct ThresholdRow {
  double t = 0.0;
  double delta_star = 0.0;
  SharpnessStatus status = SharpnessStatus::Sharp;
  std::optional<double> n_star;  // empty where the curve is undefined
};

// Threshold curves sampled on [t_min, t_max] with the given step.
inline std::vector<ThresholdRow> thresholds_table(double t_min, double t_max,
                                                  double step) {
  if (!(t_min > 0.0) || !(t_max > t_min) || !(step > 0.0))
    throw std::domain_error("thresholds: need 0 < t_min < t_max and step > 0");
  std::vector<ThresholdRow> rows;
  const int count = int(std::floor((t_max - t_min) / step + 1e-9)) + 1;
  rows.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t = t_min + double(i) * step;
    ThresholdRow row;
    row.t = t;
    const DeltaStar ds = delta_star(t);
    row.delta_star = ds.value;
    row.status = ds.status;
    try {
      row.n_star = n_star(t);
    } catch (const std::domain_error&) {
      row.n_star = std::nullopt;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace riplab
