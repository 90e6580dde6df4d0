#pragma once

// Binary Markov chain on the ordered alphabet {1 < 2}:
//   P(next = 2 | current = 1) = a,   P(next = 1 | current = 2) = b.
// Closed-form moments of the +1/-1 walk Z_k = [X_k = 1] - [X_k = 2] and its
// partial sums S_k.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "marklis/rng.hpp"

namespace marklis {

using Letter = std::uint32_t;

/// Transition probabilities (a, b), both in [0, 1].
class ChainParams {
 public:
  /// Throws DomainError unless 0 <= a, b <= 1.
  ChainParams(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// a + b = 0: both states absorb.
  bool is_absorbing() const noexcept { return a_ + b_ == 0.0; }
  /// a = b = 1: the chain flips every step.
  bool is_alternating() const noexcept { return a_ == 1.0 && b_ == 1.0; }
  bool is_symmetric() const noexcept { return a_ == b_; }

  friend bool operator==(const ChainParams&, const ChainParams&) = default;

 private:
  double a_;
  double b_;
};

struct DerivedParams {
  double pi1;           // stationary mass of letter 1
  double pi2;           // stationary mass of letter 2
  double lambda2;       // second eigenvalue 1 - a - b
  double mu;            // E Z_k under the stationary start
  double sigma2;        // Var Z_k
  double sigma_tilde2;  // lim Var S_k / k
};

/// Stationary and spectral constants. At a = b = 0 the stationary vector is
/// taken to be (1, 0); sigma_tilde2 vanishes whenever the chain is
/// deterministic (a = b = 1) or sigma2 = 0.
DerivedParams derive(const ChainParams& params) noexcept;

/// Law of X_0 as (p1, p2) together with beta = a p1 - b p2.
class InitialDistribution {
 public:
  /// Throws DomainError unless 0 <= p1 <= 1.
  InitialDistribution(const ChainParams& params, double p1);

  static InitialDistribution stationary(const ChainParams& params);
  static InitialDistribution point1(const ChainParams& params) { return {params, 1.0}; }
  static InitialDistribution point2(const ChainParams& params) { return {params, 0.0}; }

  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }
  double beta() const noexcept { return beta_; }

 private:
  double p1_;
  double p2_;
  double beta_;
};

/// A finite word over the ordered alphabet {1, ..., m}.
class Word {
 public:
  /// Throws InvalidArgument if m < 2 or a letter falls outside 1..m.
  Word(std::vector<Letter> letters, std::uint32_t alphabet_size);

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::uint32_t alphabet_size() const noexcept { return m_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }

  /// Same letters in reverse order.
  Word reversed() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
  std::uint32_t m_;
};

using DistributionVector = std::array<double, 2>;

/// (p_n^1, p_n^2) = pi + lambda2^n * beta/(a+b) * (1, -1).
/// Throws DomainError when a = b = 0.
DistributionVector evolve(const ChainParams& params, const InitialDistribution& init,
                          std::size_t n);

/// Samples X_0 from `init`, then X_1..X_n; the returned word holds X_1..X_n.
/// Throws InvalidArgument for n = 0.
Word sample_word(const ChainParams& params, const InitialDistribution& init, std::size_t n,
                 std::uint64_t seed);
Word sample_word(const ChainParams& params, const InitialDistribution& init, std::size_t n,
                 Philox4x64& engine);

/// Fills `out` with X_1..X_{out.size()} without allocating.
void sample_letters(const ChainParams& params, const InitialDistribution& init,
                    Philox4x64& engine, std::span<Letter> out);

/// E S_k = mu k + 2 (beta lambda2 / (a+b)) (1 - lambda2^k) / (1 - lambda2).
double mean_s(const ChainParams& params, const InitialDistribution& init, std::size_t k);

// The remaining moments assume the stationary start.

/// Cov(Z_k, Z_l) = sigma2 lambda2^(l-k) for 1 <= k <= l.
double cov_z(const ChainParams& params, std::size_t k, std::size_t l);

double var_s(const ChainParams& params, std::size_t k);

/// Cov(S_k, S_l) for 1 <= k <= l.
double cov_s(const ChainParams& params, std::size_t k, std::size_t l);

/// P((X_k, X_l) = (i, j)) ordered as (1,1), (1,2), (2,1), (2,2), for k < l.
using PairProbabilities = std::array<double, 4>;
PairProbabilities pair_prob(const ChainParams& params, const InitialDistribution& init,
                            std::size_t k, std::size_t l);

/// Clamps values in [-1e-15, 0) to 0 and values in (1, 1 + 1e-15] to 1; any
/// value further out throws ConsistencyError.
double clamp_probability(double p);

}  // namespace marklis
