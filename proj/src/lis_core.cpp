#include "marklis/lis_core.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "marklis/error.hpp"

namespace marklis {

LatticeWalk build_walk(const Word& word) {
  LatticeWalk walk;
  const std::uint32_t m = word.alphabet_size();
  const std::size_t n = word.size();
  walk.m_ = m;
  walk.n_ = n;
  walk.counts_.assign((n + 1) * m, 0);
  walk.walks_.assign((n + 1) * (m - 1), 0);
  for (std::size_t k = 1; k <= n; ++k) {
    std::copy_n(walk.counts_.begin() + static_cast<std::ptrdiff_t>((k - 1) * m), m,
                walk.counts_.begin() + static_cast<std::ptrdiff_t>(k * m));
    std::copy_n(walk.walks_.begin() + static_cast<std::ptrdiff_t>((k - 1) * (m - 1)), m - 1,
                walk.walks_.begin() + static_cast<std::ptrdiff_t>(k * (m - 1)));
    const Letter x = word[k - 1];
    ++walk.counts_[k * m + (x - 1)];
    // Z^x_k = +1 and Z^{x-1}_k = -1; the other walks stand still.
    if (x < m) ++walk.walks_[k * (m - 1) + (x - 1)];
    if (x > 1) --walk.walks_[k * (m - 1) + (x - 2)];
  }
  return walk;
}

std::size_t lis_bruteforce(const Word& word) {
  const std::size_t n = word.size();
  if (n > kBruteForceMaxLength) {
    throw InvalidArgument("lis_bruteforce: word length " + std::to_string(n) +
                          " exceeds the oracle cap of " +
                          std::to_string(kBruteForceMaxLength));
  }
  if (n == 0) return 0;
  // ok[mask] records whether the positions in `mask` read weakly increasing.
  // A mask extends the mask without its top bit when the top letter is not
  // below the previous top letter.
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<std::uint8_t> ok(total, 0);
  ok[0] = 1;
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    const int top = std::bit_width(mask) - 1;
    const std::uint32_t rest = mask ^ (std::uint32_t{1} << top);
    bool valid = ok[rest] != 0;
    if (valid && rest != 0) {
      const int prev = std::bit_width(rest) - 1;
      valid = word[static_cast<std::size_t>(prev)] <= word[static_cast<std::size_t>(top)];
    }
    if (valid) {
      ok[mask] = 1;
      best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
    }
  }
  return best;
}

std::size_t lis_patience(const Word& word) {
  // tails[j] = smallest possible last letter of a weakly increasing
  // subsequence of length j + 1.
  std::vector<Letter> tails;
  for (const Letter x : word.letters()) {
    const auto it = std::upper_bound(tails.begin(), tails.end(), x);
    if (it == tails.end()) {
      tails.push_back(x);
    } else {
      *it = x;
    }
  }
  return tails.size();
}

namespace {

// Shared tail of both lis_combinatorial overloads: combine the final walk
// values with the nested running maximum.
std::size_t combine(std::size_t n, std::uint32_t m, const std::vector<std::int64_t>& s_final,
                    std::int64_t nested_max) {
  // n - sum_r r S^r_n = m a^m_n, so the division is exact.
  std::int64_t weighted = 0;
  for (std::uint32_t r = 1; r < m; ++r) weighted += static_cast<std::int64_t>(r) * s_final[r - 1];
  const std::int64_t m_times_last = static_cast<std::int64_t>(n) - weighted;
  const std::int64_t last_count = m_times_last / static_cast<std::int64_t>(m);
  return static_cast<std::size_t>(last_count + nested_max);
}

}  // namespace

std::size_t lis_combinatorial(const Word& word) {
  const std::uint32_t m = word.alphabet_size();
  std::vector<std::int64_t> s(m - 1, 0);
  // running[r] = M_{r+1}(k) for the current k; all start at M_r(0) = 0.
  std::vector<std::int64_t> running(m - 1, 0);
  for (const Letter x : word.letters()) {
    if (x < m) ++s[x - 1];
    if (x > 1) --s[x - 2];
    std::int64_t below = 0;  // M_0(k)
    for (std::uint32_t r = 0; r + 1 < m; ++r) {
      running[r] = std::max(running[r], below + s[r]);
      below = running[r];
    }
  }
  return combine(word.size(), m, s, running[m - 2]);
}

std::size_t lis_combinatorial(const LatticeWalk& walk) {
  const std::uint32_t m = walk.alphabet_size();
  const std::size_t n = walk.length();
  std::vector<std::int64_t> running(m - 1, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    std::int64_t below = 0;
    for (std::uint32_t r = 1; r < m; ++r) {
      running[r - 1] = std::max(running[r - 1], below + walk.s(k, r));
      below = running[r - 1];
    }
  }
  std::vector<std::int64_t> s_final(m - 1);
  for (std::uint32_t r = 1; r < m; ++r) s_final[r - 1] = walk.s(n, r);
  return combine(n, m, s_final, running[m - 2]);
}

std::size_t YoungShape::size() const noexcept {
  return std::accumulate(rows.begin(), rows.end(), std::size_t{0});
}

YoungShape rsk_shape(const Word& word) {
  std::vector<std::vector<Letter>> tableau;
  for (Letter x : word.letters()) {
    for (std::size_t i = 0;; ++i) {
      if (i == tableau.size()) {
        tableau.push_back({x});
        break;
      }
      auto& row = tableau[i];
      const auto it = std::upper_bound(row.begin(), row.end(), x);
      if (it == row.end()) {
        row.push_back(x);
        break;
      }
      std::swap(x, *it);
    }
  }
  YoungShape shape;
  shape.rows.reserve(tableau.size());
  for (const auto& row : tableau) shape.rows.push_back(row.size());
  return shape;
}

}  // namespace marklis
