#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "riplab/adversarial.hpp"
#include "riplab/ric.hpp"
#include "riplab/rng.hpp"
#include "support/oracles.hpp"

using namespace riplab;

TEST(RicExact, OrthonormalColumnsAreIsometric) {
  Rng rng(31);
  const Mat q = oracles::random_orthonormal(10, 6, rng);
  for (int s = 1; s <= 4; ++s) {
    const RicReport rep = ric_exact(q, s);
    EXPECT_LE(rep.value, 1e-10);
    EXPECT_EQ(rep.method, RicMethod::ExactEnumeration);
  }
}

TEST(RicExact, ScaledIdentity) {
  for (double c : {0.5, 1.0, 2.0}) {
    Mat a = Mat::identity(6);
    for (double& v : a.a) v *= c;
    const RicReport rep = ric_exact(a, 3);
    EXPECT_NEAR(rep.value, std::abs(c * c - 1.0), 1e-12);
    EXPECT_EQ(rep.supports_examined, 20);  // C(6,3)
  }
}

TEST(RicExact, MatchesBruteForceOracle) {
  Rng rng(32);
  const Mat a = oracles::random_matrix(10, 16, rng, 1.0 / std::sqrt(10.0));
  const RicReport rep = ric_exact(a, 2);
  EXPECT_EQ(rep.supports_examined, 120);  // C(16,2)
  EXPECT_NEAR(rep.value, oracles::ric_bruteforce(a, 2), 1e-9);
}

TEST(RicExact, NonIntegerOrderRoundsUp) {
  Rng rng(33);
  const Mat a = oracles::random_matrix(8, 10, rng, 1.0 / std::sqrt(8.0));
  const RicReport r15 = ric_exact(a, 1.5);
  const RicReport r2 = ric_exact(a, 2.0);
  EXPECT_DOUBLE_EQ(r15.value, r2.value);
  EXPECT_DOUBLE_EQ(r15.order, 1.5);
}

TEST(RicExact, BudgetAndDomainErrors) {
  Rng rng(34);
  const Mat a = oracles::random_matrix(10, 60, rng);
  EXPECT_THROW(ric_exact(a, 12), budget_error);       // C(60,12) >> 1e6
  EXPECT_THROW(ric_exact(a, 0.0), std::domain_error);
  EXPECT_THROW(ric_exact(a, 61), std::domain_error);
}

TEST(RicExact, MonotoneInOrder) {
  Rng rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat a = oracles::random_matrix(9, 12, rng, 1.0 / 3.0);
    double prev = 0.0;
    for (int s = 1; s <= 4; ++s) {
      const double cur = ric_exact(a, s).value;
      EXPECT_GE(cur + 1e-12, prev);
      prev = cur;
    }
  }
}

TEST(RocExact, OrthogonalCases) {
  EXPECT_NEAR(roc_exact(Mat::identity(8), 2, 3), 0.0, 1e-12);
  Rng rng(36);
  const Mat q = oracles::random_orthonormal(12, 7, rng);
  EXPECT_NEAR(roc_exact(q, 2, 2), 0.0, 1e-10);
}

TEST(RocExact, MatchesBruteForceOracle) {
  Rng rng(37);
  const Mat a = oracles::random_matrix(8, 12, rng, 1.0 / std::sqrt(8.0));
  EXPECT_NEAR(roc_exact(a, 2, 2), oracles::roc_bruteforce(a, 2, 2), 1e-9);
  EXPECT_NEAR(roc_exact(a, 1, 3), oracles::roc_bruteforce(a, 1, 3), 1e-9);
}

TEST(RocExact, ConsistencyWithRic) {
  // theta_{k,k} <= 2 delta_{2k} on seeded instances
  Rng rng(38);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat a = oracles::random_matrix(10, 12, rng, 1.0 / std::sqrt(10.0));
    const double theta = roc_exact(a, 2, 2);
    const double delta4 = ric_exact(a, 4).value;
    EXPECT_LE(theta, 2.0 * delta4 * (1.0 + 1e-10));
  }
}

TEST(RicScaling, UpscaleLemma) {
  EXPECT_DOUBLE_EQ(ric_upscale_bound(0.1, 2.0), 0.3);
  EXPECT_DOUBLE_EQ(ric_upscale_bound(0.0, 7.0), 0.0);
  EXPECT_THROW(ric_upscale_bound(-0.1, 2.0), std::domain_error);
  EXPECT_THROW(ric_upscale_bound(0.1, 1.0), std::domain_error);

  Rng rng(39);
  const Mat a = oracles::random_matrix(10, 14, rng, 1.0 / std::sqrt(10.0));
  const double d2 = ric_exact(a, 2).value;
  const double d4 = ric_exact(a, 4).value;
  EXPECT_LE(d4, ric_upscale_bound(d2, 2.0) + 1e-10);
}

TEST(RicScaling, HighOrderDominatesOrderTwoK) {
  // delta_{2k} <= sqrt(t/(t-1)) delta_{tk} whenever t >= 4/3
  Rng rng(40);
  for (const auto& [t, k] : std::vector<std::pair<double, int>>{{1.5, 2}, {3.0, 1}, {2.0, 2}}) {
    const Mat a = oracles::random_matrix(11, 13, rng, 1.0 / std::sqrt(11.0));
    const double d2k = ric_exact(a, 2.0 * k).value;
    const double dtk = ric_exact(a, t * k).value;
    EXPECT_LE(d2k, std::sqrt(t / (t - 1.0)) * dtk + 1e-10);
  }
}

TEST(L2Identity, RandomizedChecks) {
  // sum_i w_i |A(sum_j w_j b_j - c b_i)|^2 + (1-2c) sum_{i<j} w_i w_j |A(b_i-b_j)|^2
  //   = (1-c)^2 sum_i w_i |A b_i|^2   for convex weights w
  Rng rng(41);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + rng.next_below(4);
    const int p = 2 + rng.next_below(5);
    const int terms = 1 + rng.next_below(4);
    const Mat a = oracles::random_matrix(n, p, rng);
    const double c = 2.0 * rng.next_double() - 0.5;
    Vec w(terms);
    double tot = 0.0;
    for (double& x : w) {
      x = rng.next_double() + 1e-6;
      tot += x;
    }
    for (double& x : w) x /= tot;
    std::vector<Vec> img(terms);
    Vec mean(n, 0.0);
    for (int i = 0; i < terms; ++i) {
      img[i] = matvec(a, oracles::random_vector(p, rng));
      for (int r = 0; r < n; ++r) mean[r] += w[i] * img[i][r];
    }
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < terms; ++i) {
      double d = 0.0;
      for (int r = 0; r < n; ++r) {
        const double e = mean[r] - c * img[i][r];
        d += e * e;
      }
      lhs += w[i] * d;
      rhs += w[i] * (1.0 - c) * (1.0 - c) * dot(img[i], img[i]);
    }
    for (int i = 0; i < terms; ++i)
      for (int j = i + 1; j < terms; ++j) {
        double d = 0.0;
        for (int r = 0; r < n; ++r) {
          const double e = img[i][r] - img[j][r];
          d += e * e;
        }
        lhs += (1.0 - 2.0 * c) * w[i] * w[j] * d;
      }
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    ASSERT_NEAR(lhs, rhs, 1e-9 * scale);
  }
}

TEST(DeltaStar, ProvenAndConjecturedBranches) {
  const DeltaStar at1 = delta_star(1.0);
  EXPECT_DOUBLE_EQ(at1.value, 1.0 / 3.0);
  EXPECT_EQ(at1.status, SharpnessStatus::Sharp);

  const DeltaStar at43 = delta_star(4.0 / 3.0);
  EXPECT_EQ(at43.value, 0.5);  // exact
  EXPECT_EQ(at43.status, SharpnessStatus::Sharp);

  const DeltaStar at2 = delta_star(2.0);
  EXPECT_NEAR(at2.value, std::sqrt(0.5), 1e-12);
  EXPECT_EQ(at2.status, SharpnessStatus::Sharp);

  const DeltaStar mid = delta_star(1.2);
  EXPECT_DOUBLE_EQ(mid.value, 1.2 / 2.8);
  EXPECT_EQ(mid.status, SharpnessStatus::Conjectured);

  // branch continuity at 4/3: conjectured formula meets the proven value
  EXPECT_NEAR((4.0 / 3.0) / (4.0 - 4.0 / 3.0), at43.value, 1e-12);

  EXPECT_THROW(delta_star(0.0), std::domain_error);
  EXPECT_THROW(delta_star(-1.0), std::domain_error);
}

TEST(NStar, CurveValuesAndMinimum) {
  EXPECT_NEAR(n_star(1.85), 83.22859806098709, 1e-9);
  EXPECT_NEAR(n_star(2.0), 83.73700023386084, 1e-9);
  // continuity across the branch point
  EXPECT_NEAR(n_star(4.0 / 3.0 - 1e-9), n_star(4.0 / 3.0 + 1e-9), 1e-4);

  double best_t = 0.0, best = 1e300;
  for (double t = 1.4; t <= 2.4 + 1e-12; t += 0.005) {
    const double v = n_star(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  EXPECT_NEAR(best_t, 1.85, 0.01);
  EXPECT_NEAR(best, 83.2, 0.1);
  EXPECT_THROW(n_star(0.0), std::domain_error);
}

TEST(RicProbabilityBound, LogSpaceEvaluation) {
  // frozen against 40-digit arithmetic
  const double bound = ric_probability_bound(10000, 1000, 50, 0.5);
  ASSERT_LT(bound, 1.0);
  const double exponent = std::log((1.0 - bound) / 2.0);
  EXPECT_NEAR(exponent, 228.4809718617635, 1e-9);

  // lambda -> 0 drives the bound to -inf; reported unclamped
  EXPECT_LT(ric_probability_bound(100, 1000, 5, 1e-6), -1e10);
  // huge n drives the bound toward (but never onto) 1
  const double near_one = ric_probability_bound(2000000000L, 1000, 5, 0.5);
  EXPECT_GT(near_one, 1.0 - 1e-12);
  EXPECT_LT(near_one, 1.0);

  EXPECT_THROW(ric_probability_bound(10, 100, 10, 0.5), std::domain_error);
  EXPECT_THROW(ric_probability_bound(100, 100, 5, 0.0), std::domain_error);
  EXPECT_THROW(ric_probability_bound(100, 100, 5, 1.0), std::domain_error);
}

TEST(Guarantee, HighOrderRule) {
  const GuaranteeVerdict yes = guarantee_exact_recovery(0.70, 2.0, 5);
  EXPECT_TRUE(yes.guaranteed);
  EXPECT_EQ(yes.rule_applied, GuaranteeRule::SharpHighOrder);
  EXPECT_NEAR(yes.threshold_used, std::sqrt(0.5), 1e-15);

  const GuaranteeVerdict no = guarantee_exact_recovery(0.7072, 2.0, 5);
  EXPECT_FALSE(no.guaranteed);
  EXPECT_EQ(no.rule_applied, GuaranteeRule::None);
}

TEST(Guarantee, LowOrderRules) {
  // tk = 4 even: threshold t/(4-t) = 0.25
  const GuaranteeVerdict even = guarantee_exact_recovery(0.19, 0.8, 5);
  EXPECT_TRUE(even.guaranteed);
  EXPECT_EQ(even.rule_applied, GuaranteeRule::EvenTkLowOrder);
  EXPECT_NEAR(even.threshold_used, 0.25, 1e-15);
  EXPECT_FALSE(guarantee_exact_recovery(0.26, 0.8, 5).guaranteed);

  // tk = 3 odd at t = 0.6, k = 5
  const double root = std::sqrt(0.6 * 0.6 - 1.0 / 25.0);
  const double thr = root / (4.0 - 1.2 + root);
  const GuaranteeVerdict odd = guarantee_exact_recovery(thr - 1e-3, 0.6, 5);
  EXPECT_TRUE(odd.guaranteed);
  EXPECT_EQ(odd.rule_applied, GuaranteeRule::OddTkLowOrder);
  EXPECT_NEAR(odd.threshold_used, thr, 1e-15);
  EXPECT_FALSE(guarantee_exact_recovery(thr + 1e-3, 0.6, 5).guaranteed);

  // non-integral tk falls outside the low-order rules
  EXPECT_EQ(guarantee_exact_recovery(0.01, 0.7, 3).rule_applied, GuaranteeRule::None);
  // the gap 1 <= t < 4/3 is deliberately undecided
  EXPECT_FALSE(guarantee_exact_recovery(0.01, 1.2, 5).guaranteed);
  EXPECT_FALSE(guarantee_exact_recovery(0.01, 1.0, 5).guaranteed);

  EXPECT_THROW(guarantee_exact_recovery(-0.1, 2.0, 5), std::domain_error);
}

TEST(NspVerify, TrivialNullSpace) {
  Rng rng(42);
  Mat a = oracles::random_matrix(6, 6, rng);
  for (int i = 0; i < 6; ++i) a(i, i) += 4.0;  // comfortably invertible
  EXPECT_TRUE(nsp_verify(a, 1));
  EXPECT_TRUE(nsp_verify(a, 3));
}

TEST(NspVerify, AdversarialInstanceViolates) {
  const AdversarialInstance inst = hard_instance_high_t(2.0, 2, 8);
  // the planted null direction concentrates half its mass on 2 coordinates
  EXPECT_FALSE(nsp_verify(inst.a, 2));
}

TEST(NspVerify, AgreesWithNullSpaceSampling) {
  Rng rng(43);
  const Mat a = oracles::random_matrix(12, 24, rng, 1.0 / std::sqrt(12.0));
  const bool verdict = nsp_verify(a, 2);

  // sampling oracle over the null space; can only refute, never certify
  const Eigen::MatrixXd ea = oracles::to_eigen(a);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(ea);
  const Eigen::MatrixXd kernel = lu.kernel();
  ASSERT_GT(kernel.cols(), 0);
  bool found_violation = false;
  for (int trial = 0; trial < 100000 && !found_violation; ++trial) {
    Eigen::VectorXd coef(kernel.cols());
    for (int i = 0; i < coef.size(); ++i) coef(i) = rng.next_gaussian();
    Eigen::VectorXd h = kernel * coef;
    if (h.lpNorm<1>() < 1e-12) continue;
    std::vector<double> mags(h.size());
    for (int i = 0; i < h.size(); ++i) mags[i] = std::abs(h(i));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    const double top = mags[0] + mags[1];
    if (top >= h.lpNorm<1>() - top) found_violation = true;
  }
  if (found_violation) {
    EXPECT_FALSE(verdict);
  }
  // LP said the property holds: sampling must not disprove it
  if (verdict) {
    EXPECT_FALSE(found_violation);
  }
}

TEST(NspVerify, BudgetError) {
  Rng rng(44);
  const Mat a = oracles::random_matrix(8, 64, rng);
  EXPECT_THROW(nsp_verify(a, 8), budget_error);  // C(64,8) >> 1e6
}

TEST(RicSampled, IsometryAndScaling) {
  Rng rng(45);
  // orthogonal change of basis on vec(X) is an isometry on matrices
  const Mat q = oracles::random_orthonormal(9, 9, rng);
  const RicReport iso = ric_sampled(LinearMap{q, 3, 3}, 1, 5, 7);
  EXPECT_LE(iso.value, 1e-9);
  EXPECT_EQ(iso.method, RicMethod::SampledLowerBound);

  for (double c : {0.7, 1.3}) {
    Mat scaled = Mat::identity(9);
    for (double& v : scaled.a) v *= c;
    const RicReport rep = ric_sampled(LinearMap{scaled, 3, 3}, 2, 3, 7);
    EXPECT_NEAR(rep.value, std::abs(c * c - 1.0), 1e-6);
  }
}

TEST(RicSampled, SandwichedByOracles) {
  Rng rng(46);
  Mat m(9, 9);
  for (double& v : m.a) v = rng.next_gaussian() / 3.0;
  const LinearMap map{m, 3, 3};
  const RicReport rep = ric_sampled(map, 1, 20, 1);

  // lower reference: pure random search over rank-one directions
  Rng search(2);
  double random_best = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Mat x(3, 3);
    const Vec g = oracles::random_vector(3, search), h = oracles::random_vector(3, search);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x(i, j) = g[i] * h[j];
    const double f = frobenius_norm(x);
    for (double& v : x.a) v /= f;
    const Vec img = map.apply(x);
    random_best = std::max(random_best, std::abs(dot(img, img) - 1.0));
  }

  // upper reference: dense sphere grid over the left factor with the right
  // factor maximized exactly by a 3x3 eigensolve
  double grid_best = 0.0;
  const int nt = 360, np = 720;
  for (int it = 0; it < nt; ++it) {
    const double theta = M_PI * (it + 0.5) / nt;
    for (int jp = 0; jp < np; ++jp) {
      const double phi = 2.0 * M_PI * jp / np;
      const Eigen::Vector3d g(std::sin(theta) * std::cos(phi),
                              std::sin(theta) * std::sin(phi), std::cos(theta));
      Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
      for (int q = 0; q < 9; ++q) {
        Eigen::Matrix3d mq;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) mq(i, j) = m(q, j * 3 + i);
        const Eigen::Vector3d row = mq.transpose() * g;
        c += row * row.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(c);
      grid_best = std::max({grid_best, std::abs(es.eigenvalues()(2) - 1.0),
                            std::abs(es.eigenvalues()(0) - 1.0)});
    }
  }

  EXPECT_GE(rep.value, random_best - 1e-12);
  EXPECT_LE(rep.value, grid_best + 1e-3);
  // the refined search should essentially reach the grid optimum
  EXPECT_NEAR(rep.value, grid_best, 1e-3);
}
