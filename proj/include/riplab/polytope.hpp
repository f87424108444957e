#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"

namespace riplab {

// The polytope T(alpha, s) = { v : ||v||_inf <= alpha, ||v||_1 <= s*alpha }.
// Every member decomposes into a convex combination of s-sparse vectors that
// share its support and l1 norm; `decompose` constructs one such combination
// and `verify_combination` checks any candidate independently.

struct PolytopeSpec {
  double alpha = 1.0;
  int s = 1;

  PolytopeSpec(double alpha_, int s_) : alpha(alpha_), s(s_) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::domain_error("polytope: alpha must be positive and finite");
    if (s < 1) throw std::domain_error("polytope: s must be at least 1");
  }
};

struct ConvexCombination {
  struct Term {
    double weight;
    Vec vector;
  };
  std::vector<Term> terms;
};

// Membership with a relative slack of 1e-12 so that scale does not matter.
inline bool is_member(const Vec& v, const PolytopeSpec& spec) {
  const double tol = 1.0 + 1e-12;
  return norm_linf(v) <= spec.alpha * tol && norm_l1(v) <= spec.s * spec.alpha * tol;
}

namespace detail {

// Working term of the decomposition: magnitudes only, signs are reattached at
// the end. Terms with identical support and values merge; two expansion paths
// that reach the same state perform identical arithmetic, so bit-exact
// matching suffices as the merge key.
struct PolyKey {
  std::vector<int> support;
  std::vector<std::uint64_t> bits;

  bool operator<(const PolyKey& o) const {
    if (support != o.support) return support < o.support;
    return bits < o.bits;
  }
};

inline PolyKey poly_key(const Vec& mags) {
  PolyKey k;
  for (int i = 0; i < int(mags.size()); ++i) {
    if (mags[i] != 0.0) {
      k.support.push_back(i);
      std::uint64_t b;
      std::memcpy(&b, &mags[i], sizeof b);
      k.bits.push_back(b);
    }
  }
  return k;
}

}  // namespace detail

inline ConvexCombination decompose(const Vec& v, const PolytopeSpec& spec) {
  if (!is_member(v, spec))
    throw membership_error("decompose: vector is not in T(alpha, s)");

  const int p = int(v.size());
  const double alpha = spec.alpha;
  const int s = spec.s;

  Vec mags(p, 0.0), signs(p, 1.0);
  for (int i = 0; i < p; ++i) {
    mags[i] = std::abs(v[i]);
    signs[i] = v[i] < 0.0 ? -1.0 : 1.0;
  }

  std::map<detail::PolyKey, double> terms;
  terms.emplace(detail::poly_key(mags), 1.0);
  std::map<detail::PolyKey, double> done;

  auto sparsity = [](const detail::PolyKey& k) { return int(k.support.size()); };

  int level_guard = p + 2;
  while (true) {
    if (--level_guard < 0)
      throw numeric_error("decompose: level guard exceeded (sparsity must shrink)");
    // peel off finished terms, keep the maximal-sparsity working set
    std::map<detail::PolyKey, double> next;
    std::vector<std::pair<detail::PolyKey, double>> active;
    for (auto& [key, w] : terms) {
      if (sparsity(key) <= s) {
        done[key] += w;
      } else {
        active.emplace_back(key, w);
      }
    }
    if (active.empty()) break;

    for (auto& [key, weight] : active) {
      const int l = sparsity(key);
      // magnitudes sorted descending, ties by original index ascending
      std::vector<std::pair<double, int>> entries(l);
      for (int t = 0; t < l; ++t) {
        double m;
        std::memcpy(&m, &key.bits[t], sizeof m);
        entries[t] = {m, key.support[t]};
      }
      std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });

      // suffix sums a_j + ... + a_l in the sorted order
      Vec suffix(l + 1, 0.0);
      for (int t = l - 1; t >= 0; --t) suffix[t] = suffix[t + 1] + entries[t].first;

      // largest block start j (0-based) with a_j + ... + a_{l-1} <= (l-1-j) alpha;
      // j = 0 always qualifies because l > s and the l1 norm is at most s*alpha
      int j = -1;
      const double slack = 1.0 + 1e-12;
      for (int cand = l - 2; cand >= 0; --cand) {
        if (suffix[cand] <= double(l - 1 - cand) * alpha * slack) {
          j = cand;
          break;
        }
      }
      if (j < 0)
        throw numeric_error("decompose: no feasible block (membership violated)");

      const double block_sum = suffix[j];
      const int block = l - j;  // block size, >= 2
      // shared magnitude of the children; at most alpha*(1+1e-12) by the
      // block condition, which the sup-norm contract tolerates
      const double common = block_sum / double(block - 1);

      // child w zeroes the w-th block entry; its weight is proportional to
      // common - a_w
      std::vector<std::pair<detail::PolyKey, double>> kids;
      double kept = 0.0;
      for (int w = j; w < l; ++w) {
        const double bw = std::max(0.0, common - entries[w].first);
        const double lam = bw / common;
        if (lam < 1e-15) continue;
        Vec child(p, 0.0);
        for (int t = 0; t < j; ++t) child[entries[t].second] = entries[t].first;
        for (int t = j; t < l; ++t) child[entries[t].second] = common;
        child[entries[w].second] = 0.0;
        kids.emplace_back(detail::poly_key(child), lam);
        kept += lam;
      }
      if (kids.empty())
        throw numeric_error("decompose: all child weights vanished");
      for (auto& [ck, lam] : kids) {
        if (sparsity(ck) >= l)
          throw numeric_error("decompose: child sparsity did not decrease");
        next[ck] += weight * (lam / kept);
      }
    }
    terms = std::move(next);
  }

  double total = 0.0;
  for (auto& [key, w] : done) total += w;

  ConvexCombination comb;
  comb.terms.reserve(done.size());
  for (auto& [key, w] : done) {
    Vec signed_u(p, 0.0);
    for (std::size_t t = 0; t < key.support.size(); ++t) {
      double m;
      std::memcpy(&m, &key.bits[t], sizeof m);
      signed_u[key.support[t]] = signs[key.support[t]] * m;
    }
    comb.terms.push_back({w / total, std::move(signed_u)});
  }
  return comb;
}

// Independent check of the decomposition contract: convex weights, support
// containment, s-sparsity, l1 preservation, the sup-norm cap, and exact
// reconstruction, all at the decompose tolerances.
inline bool verify_combination(const Vec& v, const PolytopeSpec& spec,
                               const ConvexCombination& comb) {
  if (comb.terms.empty()) return false;
  const int p = int(v.size());
  const double l1_v = norm_l1(v);
  const double l1_tol = 1e-10 * std::max(l1_v, 0.0);
  const double linf_cap = spec.alpha * (1.0 + 1e-10);

  double weight_sum = 0.0;
  Vec recon(p, 0.0);
  for (const auto& term : comb.terms) {
    if (!(term.weight >= -1e-12) || !(term.weight <= 1.0 + 1e-12)) return false;
    if (int(term.vector.size()) != p) return false;
    weight_sum += term.weight;
    int nnz = 0;
    double l1_u = 0.0, linf_u = 0.0;
    for (int i = 0; i < p; ++i) {
      const double x = term.vector[i];
      if (x != 0.0) {
        if (v[i] == 0.0) return false;  // support escapes supp(v)
        ++nnz;
        l1_u += std::abs(x);
        linf_u = std::max(linf_u, std::abs(x));
      }
      recon[i] += term.weight * x;
    }
    if (nnz > spec.s) return false;
    if (std::abs(l1_u - l1_v) > l1_tol) return false;
    if (linf_u > linf_cap) return false;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) return false;

  const double recon_tol = 1e-10 * norm_linf(v);
  for (int i = 0; i < p; ++i)
    if (std::abs(recon[i] - v[i]) > recon_tol) return false;
  return true;
}

}  // namespace riplab
