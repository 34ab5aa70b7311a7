#include "ychan/dof.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ychan/error.hpp"

namespace ychan {

namespace {

void check_params(const DofTuple& d, const RegionParams& p) {
  if (p.K != d.K())
    throw Error(Errc::range, "tuple has K=" + std::to_string(d.K()) + " but parameters have K=" + std::to_string(p.K));
  if (p.K < 2 || p.M < 1 || p.N < 1) throw Error(Errc::range, "K >= 2, M >= 1 and N >= 1 required");
}

// Scan all orderings of 0..K-1 over an integer weight matrix. Entries are
// numerators over a common denominator, so the scan is exact.
template <typename Int>
void scan_permutations(const std::vector<std::vector<Int>>& w, std::size_t max_listed, Int& best,
                       std::vector<std::vector<int>>& argmax, std::size_t& count) {
  const std::size_t K = w.size();
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  bool first = true;
  do {
    Int sum = 0;
    for (std::size_t i = 0; i + 1 < K; ++i) {
      const auto& row = w[perm[i]];
      for (std::size_t j = i + 1; j < K; ++j) sum += row[perm[j]];
    }
    if (first || sum > best) {
      best = sum;
      argmax.clear();
      count = 0;
      first = false;
    }
    if (sum == best) {
      if (argmax.size() < max_listed) argmax.push_back(perm);
      ++count;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

bool DofTuple::all_integral() const {
  return std::all_of(entries().begin(), entries().end(), [](const auto& kv) { return is_integer(kv.second); });
}

DofTuple make_tuple3(const Rational& d12, const Rational& d13, const Rational& d21, const Rational& d23,
                     const Rational& d31, const Rational& d32) {
  DofTuple d(3);
  d.set({1, 2}, d12);
  d.set({1, 3}, d13);
  d.set({2, 1}, d21);
  d.set({2, 3}, d23);
  d.set({3, 1}, d31);
  d.set({3, 2}, d32);
  return d;
}

RegionVerdict permutation_bound(const DofTuple& d, const Rational& bound, const RegionOptions& options) {
  const int K = d.K();
  if (K > options.max_users)
    throw Error(Errc::complexity_guard,
                "K=" + std::to_string(K) + " exceeds the permutation-scan cap of " + std::to_string(options.max_users));

  BigInt common = 1;
  for (const auto& [e, v] : d.entries()) common = boost::multiprecision::lcm(common, denominator(v));

  const auto n = static_cast<std::size_t>(K);
  std::vector<std::vector<BigInt>> big(n, std::vector<BigInt>(n, 0));
  BigInt largest = 0;
  for (const auto& [e, v] : d.entries()) {
    BigInt scaled = numerator(v) * (common / denominator(v));
    largest = std::max(largest, scaled);
    big[e.from.index - 1][e.to.index - 1] = std::move(scaled);
  }

  std::vector<std::vector<int>> argmax;
  std::size_t count = 0;
  BigInt best = 0;
  const BigInt pairs = BigInt(K) * (K - 1) / 2;
  if (largest * pairs < BigInt(std::numeric_limits<long long>::max() / 2)) {
    std::vector<std::vector<long long>> small(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) small[i][j] = big[i][j].convert_to<long long>();
    long long best_small = 0;
    scan_permutations(small, options.max_listed, best_small, argmax, count);
    best = best_small;
  } else {
    scan_permutations(big, options.max_listed, best, argmax, count);
  }

  RegionVerdict verdict;
  verdict.max_lhs = Rational(best, common);
  verdict.inside = verdict.max_lhs <= bound;
  verdict.binding_count = count;
  verdict.binding_permutations.reserve(argmax.size());
  for (const auto& perm : argmax) {
    Permutation p;
    p.reserve(perm.size());
    for (int v : perm) p.emplace_back(v + 1);
    verdict.binding_permutations.push_back(std::move(p));
  }
  return verdict;
}

RegionVerdict region_contains(const DofTuple& d, const RegionParams& p, const RegionOptions& options) {
  check_params(d, p);
  if (p.N > p.M)
    throw Error(Errc::regime, "region characterization needs N <= M (got N=" + std::to_string(p.N) +
                                  ", M=" + std::to_string(p.M) + "); use the general outer bound");
  return permutation_bound(d, Rational(p.N), options);
}

bool general_outer_bound_contains(const DofTuple& d, const RegionParams& p, const RegionOptions& options) {
  check_params(d, p);
  const Rational bound = std::min<long long>(p.N, static_cast<long long>(p.K - 1) * p.M);
  if (!permutation_bound(d, bound, options).inside) return false;

  const Rational cut = std::min(p.M, p.N);
  std::vector<Rational> out(static_cast<std::size_t>(p.K) + 1), in(static_cast<std::size_t>(p.K) + 1);
  for (const auto& [e, v] : d.entries()) {
    out[e.from.index] += v;
    in[e.to.index] += v;
  }
  for (int i = 1; i <= p.K; ++i)
    if (out[i] > cut || in[i] > cut) return false;
  return true;
}

Rational sum_dof(const DofTuple& d) {
  Rational total = 0;
  for (const auto& [e, v] : d.entries()) total += v;
  return total;
}

DofTuple symmetric_tuple(int K, int N) {
  if (K < 2 || N < 1) throw Error(Errc::range, "symmetric tuple needs K >= 2 and N >= 1");
  const Rational each(2 * N, K * (K - 1));
  DofTuple d(K);
  for (const Edge& e : all_edges(K)) d.set(e, each);
  return d;
}

}  // namespace ychan
