#pragma once

// Longest weakly increasing subsequence of a word, by three independent
// routes, plus the RSK shape.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "marklis/chain_model.hpp"

namespace marklis {

/// Prefix letter counts a^r_k and difference walks S^r_k = a^r_k - a^{r+1}_k
/// for k = 0..n. Letter indices r are 1-based throughout.
class LatticeWalk {
 public:
  std::uint32_t alphabet_size() const noexcept { return m_; }
  std::size_t length() const noexcept { return n_; }

  /// a^r_k, for 0 <= k <= n and 1 <= r <= m.
  std::int64_t count(std::size_t k, std::uint32_t r) const noexcept {
    return counts_[k * m_ + (r - 1)];
  }
  /// S^r_k, for 0 <= k <= n and 1 <= r <= m - 1.
  std::int64_t s(std::size_t k, std::uint32_t r) const noexcept {
    return walks_[k * (m_ - 1) + (r - 1)];
  }
  /// Z^r_k = S^r_k - S^r_{k-1}, for 1 <= k <= n.
  int z(std::size_t k, std::uint32_t r) const noexcept {
    return static_cast<int>(s(k, r) - s(k - 1, r));
  }

 private:
  friend LatticeWalk build_walk(const Word& word);

  std::uint32_t m_ = 2;
  std::size_t n_ = 0;
  std::vector<std::int64_t> counts_;  // (n+1) x m, row-major
  std::vector<std::int64_t> walks_;   // (n+1) x (m-1), row-major
};

LatticeWalk build_walk(const Word& word);

/// Largest word length accepted by lis_bruteforce.
inline constexpr std::size_t kBruteForceMaxLength = 22;

/// Scans all 2^n subsequences. Throws InvalidArgument for n > 22.
std::size_t lis_bruteforce(const Word& word);

/// Patience sorting with strictly-greater replacement, O(n log n).
std::size_t lis_patience(const Word& word);

/// The pathwise identity
///   LI_n = n/m - (1/m) sum_r r S^r_n + max_{k_1 <= ... <= k_{m-1}} sum_r S^r_{k_r},
/// with the nested maximum evaluated by the running recursion
///   M_r(k) = max(M_r(k-1), M_{r-1}(k) + S^r_k),  M_0 = 0.
/// O(n m) time, O(m) memory.
std::size_t lis_combinatorial(const Word& word);

/// Same as lis_combinatorial, reading the walk from a prebuilt LatticeWalk.
std::size_t lis_combinatorial(const LatticeWalk& walk);

struct YoungShape {
  std::vector<std::size_t> rows;  // weakly decreasing, no zero rows

  std::size_t size() const noexcept;  // sum of rows
  std::size_t row(std::size_t i) const noexcept { return i < rows.size() ? rows[i] : 0; }
  friend bool operator==(const YoungShape&, const YoungShape&) = default;
};

/// Shape of the RSK insertion tableau (row insertion for words: an inserted
/// letter bumps the leftmost entry strictly greater than itself).
YoungShape rsk_shape(const Word& word);

}  // namespace marklis
