#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "riplab/polytope.hpp"
#include "riplab/rng.hpp"
#include "support/oracles.hpp"

using namespace riplab;

namespace {

// Random member of T(alpha, s): random direction scaled inside both caps.
Vec random_member(int p, int s, double alpha, Rng& rng) {
  Vec v = oracles::random_vector(p, rng);
  const double linf = norm_linf(v);
  if (linf > 0.0) {
    const double shrink = alpha * rng.next_double() / linf;
    for (double& x : v) x *= shrink;
  }
  const double l1 = norm_l1(v);
  if (l1 > double(s) * alpha) {
    const double shrink = double(s) * alpha / l1 * (0.3 + 0.7 * rng.next_double());
    for (double& x : v) x *= shrink;
  }
  return v;
}

}  // namespace

TEST(Membership, Examples) {
  const PolytopeSpec spec(1.0, 2);
  EXPECT_TRUE(is_member({0, 0, 0, 0}, spec));
  // sup-norm fits but l1 mass is p*alpha > s*alpha
  EXPECT_FALSE(is_member({1, 1, 1}, spec));
  // boundary case ||v||_1 = s*alpha
  EXPECT_TRUE(is_member({2.0 / 3, 2.0 / 3, 2.0 / 3}, spec));
  EXPECT_FALSE(is_member({1.5, 0, 0}, spec));
}

TEST(Decompose, SparseBaseCase) {
  const PolytopeSpec spec(2.0, 3);
  const Vec v{0.5, 0, -1.5, 0, 0.25};
  const ConvexCombination comb = decompose(v, spec);
  ASSERT_EQ(comb.terms.size(), 1u);
  EXPECT_DOUBLE_EQ(comb.terms[0].weight, 1.0);
  EXPECT_EQ(comb.terms[0].vector, v);
}

TEST(Decompose, ZeroVector) {
  const ConvexCombination comb = decompose(Vec(4, 0.0), PolytopeSpec(1.0, 2));
  ASSERT_EQ(comb.terms.size(), 1u);
  EXPECT_DOUBLE_EQ(comb.terms[0].weight, 1.0);
  EXPECT_EQ(comb.terms[0].vector, Vec(4, 0.0));
}

TEST(Decompose, HandWorkedThreeTermExample) {
  const Vec v{2.0 / 3, 2.0 / 3, 2.0 / 3};
  const PolytopeSpec spec(1.0, 2);
  ConvexCombination comb = decompose(v, spec);
  ASSERT_EQ(comb.terms.size(), 3u);
  std::sort(comb.terms.begin(), comb.terms.end(),
            [](const auto& a, const auto& b) { return a.vector > b.vector; });
  const std::vector<Vec> expected{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(comb.terms[i].weight, 1.0 / 3, 1e-14);
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(comb.terms[i].vector[j], expected[i][j], 1e-14);
  }
  EXPECT_TRUE(verify_combination(v, spec, comb));
}

TEST(Decompose, NonMemberRejected) {
  EXPECT_THROW(decompose({2.0, 0.0}, PolytopeSpec(1.0, 1)), membership_error);
  EXPECT_THROW(decompose({0.9, 0.9, 0.9}, PolytopeSpec(1.0, 2)), membership_error);
}

TEST(Decompose, RoundTripThousandRandomMembers) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 5 + rng.next_below(16);            // 5..20
    const int s = 1 + rng.next_below(6);             // 1..6
    const double alpha = std::pow(10.0, 2.0 * rng.next_double() - 1.0);
    const PolytopeSpec spec(alpha, s);
    const Vec v = random_member(p, s, alpha, rng);
    ASSERT_TRUE(is_member(v, spec));
    const ConvexCombination comb = decompose(v, spec);
    ASSERT_TRUE(verify_combination(v, spec, comb))
        << "trial " << trial << " p=" << p << " s=" << s << " alpha=" << alpha;
  }
}

TEST(Decompose, WorstCaseUniformVectors) {
  // all coordinates at the l1 boundary force the deepest recursions
  {
    const Vec v(20, 6.0 / 20.0);
    const PolytopeSpec spec(1.0, 6);
    EXPECT_TRUE(verify_combination(v, spec, decompose(v, spec)));
  }
  {
    const Vec v(7, 6.0 / 7.0);
    const PolytopeSpec spec(1.0, 6);
    const ConvexCombination comb = decompose(v, spec);
    EXPECT_EQ(comb.terms.size(), 7u);  // drop one coordinate each
    EXPECT_TRUE(verify_combination(v, spec, comb));
  }
}

TEST(Decompose, SignEquivariance) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 5 + rng.next_below(10);
    const int s = 1 + rng.next_below(4);
    const PolytopeSpec spec(1.0, s);
    const Vec v = random_member(p, s, 1.0, rng);
    const int flip = rng.next_below(p);
    Vec v2(v);
    v2[flip] = -v2[flip];
    const ConvexCombination c1 = decompose(v, spec);
    const ConvexCombination c2 = decompose(v2, spec);
    ASSERT_EQ(c1.terms.size(), c2.terms.size());
    for (std::size_t i = 0; i < c1.terms.size(); ++i) {
      EXPECT_EQ(c1.terms[i].weight, c2.terms[i].weight);
      for (int j = 0; j < p; ++j) {
        const double expect = j == flip ? -c1.terms[i].vector[j] : c1.terms[i].vector[j];
        EXPECT_EQ(c2.terms[i].vector[j], expect);
      }
    }
  }
}

TEST(Converse, RandomCombinationsLandInThePolytope) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 6 + rng.next_below(10);
    const int s = 1 + rng.next_below(4);
    const double alpha = 0.5 + rng.next_double();
    const double mass = double(s) * alpha * rng.next_double();
    const int terms = 1 + rng.next_below(5);
    // random convex weights
    Vec lambda(terms);
    double total = 0.0;
    for (double& w : lambda) {
      w = 0.05 + rng.next_double();
      total += w;
    }
    for (double& w : lambda) w /= total;
    Vec sum(p, 0.0);
    for (int t = 0; t < terms; ++t) {
      // s-sparse piece with l1 norm `mass` and entries within alpha
      Vec u(p, 0.0);
      Vec mags(s);
      double l1 = 0.0;
      for (double& m : mags) {
        m = rng.next_double() + 1e-3;
        l1 += m;
      }
      for (double& m : mags) m *= mass / l1;
      const double linf = *std::max_element(mags.begin(), mags.end());
      if (linf > alpha)
        for (double& m : mags) m *= alpha / linf;  // keeps l1 <= mass
      std::vector<int> sup;
      while (int(sup.size()) < s) {
        const int idx = rng.next_below(p);
        if (std::find(sup.begin(), sup.end(), idx) == sup.end()) sup.push_back(idx);
      }
      for (int i = 0; i < s; ++i)
        u[sup[i]] = (rng.next_u64() & 1 ? 1.0 : -1.0) * mags[i];
      for (int i = 0; i < p; ++i) sum[i] += lambda[t] * u[i];
    }
    EXPECT_TRUE(is_member(sum, PolytopeSpec(alpha, s)));
  }
}

TEST(Verifier, RejectsBrokenCombinations) {
  const Vec v{2.0 / 3, 2.0 / 3, 2.0 / 3};
  const PolytopeSpec spec(1.0, 2);
  const ConvexCombination good = decompose(v, spec);

  ConvexCombination bad_weights = good;
  for (auto& t : bad_weights.terms) t.weight *= 0.9;  // weight sum 0.9
  EXPECT_FALSE(verify_combination(v, spec, bad_weights));

  ConvexCombination bad_sparsity = good;
  bad_sparsity.terms[0].vector = v;  // 3-sparse term against s = 2
  EXPECT_FALSE(verify_combination(v, spec, bad_sparsity));

  ConvexCombination bad_l1 = good;
  for (double& x : bad_l1.terms[0].vector) x *= 1.5;
  EXPECT_FALSE(verify_combination(v, spec, bad_l1));

  ConvexCombination bad_linf = good;
  bad_linf.terms[0].vector = {1.8, 0.2, 0};  // same l1, cap exceeded
  EXPECT_FALSE(verify_combination(v, spec, bad_linf));

  // support escapes supp(v): l1 norms match, coordinate 2 does not
  Vec w{1.0, 0.0, 1.5, 0.0};
  EXPECT_FALSE(verify_combination({1.0, 1.0, 0.0, 0.5}, PolytopeSpec(2.0, 2),
                                  ConvexCombination{{{1.0, w}}}));

  EXPECT_FALSE(verify_combination(v, spec, ConvexCombination{}));
}
