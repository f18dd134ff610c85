#include "matchsim/counting.hpp"

#include <algorithm>
#include <cmath>

#include "matchsim/errors.hpp"
#include "matchsim/syncword.hpp"

namespace matchsim {

int beta(std::span<const int> z, const CompatibilityGraph& g) {
  int count = 0;
  for (int v = 1; v <= g.size(); ++v) {
    bool isolated = true;
    for (int letter : z)
      if (g.compatible(v, letter)) {
        isolated = false;
        break;
      }
    if (isolated) ++count;
  }
  return count;
}

std::vector<int> trace_of(std::span<const int> w) {
  if (w.size() < 2 || w.size() % 2 != 0)
    throw ConfigError("trace is defined for words of even length 2p");
  std::vector<int> trace;
  for (std::size_t j = w.size() / 2; j < w.size(); ++j) {
    const int letter = w[j];
    if (std::find(trace.begin(), trace.end(), letter) == trace.end()) trace.push_back(letter);
  }
  return trace;
}

std::vector<std::vector<int>> enumerate_traces(const CompatibilityGraph& g) {
  const int n = g.size();
  if (n > 24) throw ConfigError("trace enumeration is limited to 24 classes");
  const std::uint32_t full = (n == 32 ? ~0u : (1u << n) - 1u);
  std::vector<std::vector<int>> traces;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::vector<int> members;
    for (int c = 1; c <= n; ++c)
      if (mask & (1u << (c - 1))) members.push_back(c);
    std::uint32_t neighborhood = 0;
    for (int c : members)
      for (int v = 1; v <= n; ++v)
        if (g.compatible(c, v)) neighborhood |= 1u << (v - 1);
    if (neighborhood == full) continue;  // E(U) = V: not a trace
    std::vector<int> perm = members;
    do {
      traces.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return traces;
}

namespace {

// Prefix data shared by the counting and the weighted (probability) sums:
// for each prefix z_1..z_i, the number of free second-half letters is i and
// the admissible first-half letters are the beta set of the prefix.
struct PrefixTables {
  std::vector<int> betas;  // betas[i-1] = beta(z_1..z_i)
};

PrefixTables prefix_tables(std::span<const int> z, const CompatibilityGraph& g) {
  PrefixTables t;
  for (std::size_t i = 1; i <= z.size(); ++i) t.betas.push_back(beta(z.subspan(0, i), g));
  return t;
}

}  // namespace

BigInt count_for_trace(std::span<const int> z, int p, const CompatibilityGraph& g) {
  const int l = static_cast<int>(z.size());
  if (l == 0) throw ConfigError("empty trace");
  if (p < l) return 0;
  const PrefixTables tables = prefix_tables(z, g);

  // Powers of i and beta_i up to p.
  auto powers = [p](long base) {
    std::vector<BigInt> pw(static_cast<std::size_t>(p) + 2);
    pw[0] = 1;
    for (std::size_t e = 1; e < pw.size(); ++e) pw[e] = pw[e - 1] * base;
    return pw;
  };

  // G[i][k]: contribution of stages i..l given first-occurrence index
  // k_i = k. Stage l closes the family at k_{l+1} = p+1.
  std::vector<std::vector<BigInt>> memo(static_cast<std::size_t>(l) + 1,
                                        std::vector<BigInt>(static_cast<std::size_t>(p) + 2, 0));
  {
    const auto pw_i = powers(l);
    const auto pw_b = powers(tables.betas[static_cast<std::size_t>(l - 1)]);
    for (int k = l; k <= p; ++k)
      memo[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
          pw_i[static_cast<std::size_t>(p - k)] * pw_b[static_cast<std::size_t>(p + 1 - k)];
  }
  for (int i = l - 1; i >= 1; --i) {
    const auto pw_i = powers(i);
    const auto pw_b = powers(tables.betas[static_cast<std::size_t>(i - 1)]);
    const int k_max = p - (l - i);  // leave room for the later indices
    for (int k = i; k <= k_max; ++k) {
      BigInt total = 0;
      for (int next = k + 1; next <= p - (l - i - 1); ++next)
        total += pw_i[static_cast<std::size_t>(next - k - 1)] *
                 pw_b[static_cast<std::size_t>(next - k)] *
                 memo[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(next)];
      memo[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = total;
    }
  }
  return memo[1][1];
}

BigInt count_for_trace_direct(std::span<const int> z, int p, const CompatibilityGraph& g) {
  const int l = static_cast<int>(z.size());
  if (l == 0) throw ConfigError("empty trace");
  if (p < l) return 0;
  const PrefixTables tables = prefix_tables(z, g);

  BigInt total = 0;
  // Enumerate 1 = k_1 < k_2 < ... < k_l < k_{l+1} = p+1 directly.
  std::vector<int> k(static_cast<std::size_t>(l) + 2);
  k[1] = 1;
  k[static_cast<std::size_t>(l) + 1] = p + 1;
  auto recurse = [&](auto&& self, int i, BigInt partial) -> void {
    if (i == l) {
      BigInt term = partial;
      const int span = k[static_cast<std::size_t>(l) + 1] - k[static_cast<std::size_t>(l)];
      BigInt factor;
      mpz_ui_pow_ui(factor.get_mpz_t(), static_cast<unsigned long>(l),
                    static_cast<unsigned long>(span - 1));
      term *= factor;
      mpz_ui_pow_ui(factor.get_mpz_t(),
                    static_cast<unsigned long>(tables.betas[static_cast<std::size_t>(l - 1)]),
                    static_cast<unsigned long>(span));
      term *= factor;
      total += term;
      return;
    }
    for (int next = k[static_cast<std::size_t>(i)] + 1; next <= p - (l - i - 1); ++next) {
      k[static_cast<std::size_t>(i) + 1] = next;
      const int span = next - k[static_cast<std::size_t>(i)];
      BigInt term = partial;
      BigInt factor;
      mpz_ui_pow_ui(factor.get_mpz_t(), static_cast<unsigned long>(i),
                    static_cast<unsigned long>(span - 1));
      term *= factor;
      mpz_ui_pow_ui(factor.get_mpz_t(),
                    static_cast<unsigned long>(tables.betas[static_cast<std::size_t>(i - 1)]),
                    static_cast<unsigned long>(span));
      term *= factor;
      self(self, i + 1, std::move(term));
    }
  };
  recurse(recurse, 1, BigInt(1));
  return total;
}

BigInt count_strongly_synchronizing(const CompatibilityGraph& g, int p) {
  if (p < 1) throw ConfigError("word length parameter p must be >= 1");
  BigInt total = 0;
  for (const auto& trace : enumerate_traces(g)) total += count_for_trace(trace, p, g);
  return total;
}

BigInt brute_force_count_strongly_synchronizing(const CompatibilityGraph& g, int p) {
  if (p < 1) throw ConfigError("word length parameter p must be >= 1");
  const int n = g.size();
  double space = 1.0;
  for (int i = 0; i < 2 * p; ++i) space *= n;
  if (space > 1e8) throw ConfigError("brute-force enumeration over n^(2p) refused above 1e8 words");

  BigInt count = 0;
  Word w(static_cast<std::size_t>(2 * p), 1);
  for (;;) {
    if (is_strongly_synchronizing(w, g)) ++count;
    std::size_t pos = w.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++w[pos] <= n) {
        done = false;
        break;
      }
      w[pos] = 1;
    }
    if (done) return count;
  }
}

double sync_probability(const CompatibilityGraph& g, int p, std::span<const double> mu) {
  const int n = g.size();
  if (static_cast<int>(mu.size()) != n) throw ConfigError("mu size does not match class count");
  if (p < 1) throw ConfigError("word length parameter p must be >= 1");

  double total = 0.0;
  for (const auto& z : enumerate_traces(g)) {
    const int l = static_cast<int>(z.size());
    if (l > p) continue;
    // Weighted analog of the counting DP: the i free second-half letters
    // weigh S_i = mu(z_1)+...+mu(z_i), the first-half letters weigh the mu
    // mass of the beta set, and each fixed first occurrence weighs mu(z_i).
    std::vector<double> s(static_cast<std::size_t>(l) + 1, 0.0);
    std::vector<double> b(static_cast<std::size_t>(l) + 1, 0.0);
    double fixed = 1.0;
    for (int i = 1; i <= l; ++i) {
      s[static_cast<std::size_t>(i)] =
          s[static_cast<std::size_t>(i - 1)] + mu[static_cast<std::size_t>(z[static_cast<std::size_t>(i - 1)] - 1)];
      double mass = 0.0;
      for (int v = 1; v <= n; ++v) {
        bool isolated = true;
        for (int j = 0; j < i; ++j)
          if (g.compatible(v, z[static_cast<std::size_t>(j)])) {
            isolated = false;
            break;
          }
        if (isolated) mass += mu[static_cast<std::size_t>(v - 1)];
      }
      b[static_cast<std::size_t>(i)] = mass;
      fixed *= mu[static_cast<std::size_t>(z[static_cast<std::size_t>(i - 1)] - 1)];
    }

    std::vector<std::vector<double>> memo(static_cast<std::size_t>(l) + 1,
                                          std::vector<double>(static_cast<std::size_t>(p) + 2, 0.0));
    for (int k = l; k <= p; ++k)
      memo[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
          std::pow(s[static_cast<std::size_t>(l)], p - k) *
          std::pow(b[static_cast<std::size_t>(l)], p + 1 - k);
    for (int i = l - 1; i >= 1; --i)
      for (int k = i; k <= p - (l - i); ++k) {
        double acc = 0.0;
        for (int next = k + 1; next <= p - (l - i - 1); ++next)
          acc += std::pow(s[static_cast<std::size_t>(i)], next - k - 1) *
                 std::pow(b[static_cast<std::size_t>(i)], next - k) *
                 memo[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(next)];
        memo[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = acc;
      }
    total += fixed * memo[1][1];
  }
  return total;
}

std::optional<CoalescenceBounds> coalescence_bounds(int n, int p, const BigInt& N) {
  if (n < 1 || p < 1) throw ConfigError("bounds need n >= 1 and p >= 1");
  if (N == 0) return std::nullopt;
  signed long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, N.get_mpz_t());
  const double log_n_words = std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
  const double iterations =
      1.0 + (2.0 * p * std::log(static_cast<double>(n)) - log_n_words) / std::log(2.0);
  return CoalescenceBounds{iterations, static_cast<double>(p) * std::exp2(iterations)};
}

std::optional<double> horizon_bound_for_mu(const CompatibilityGraph& g, int p,
                                           std::span<const double> mu) {
  const double q = sync_probability(g, p, mu);
  if (!(q > 0.0)) return std::nullopt;
  return 2.0 * p / q;
}

}  // namespace matchsim
