#pragma once

// Brute-force references for the benchmark families. Test-only.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "topzdd/families.hpp"

namespace topzdd::testing {

using set_family = std::set<std::vector<element>>;

inline std::vector<element> mask_to_set(uint64_t mask, uint32_t c) {
  std::vector<element> s;
  for (uint32_t i = 0; i < c; ++i) {
    if ((mask >> i) & 1U) s.push_back(i + 1);
  }
  return s;
}

inline set_family filter_subsets(uint32_t c, const std::function<bool(const std::vector<element>&)>& keep) {
  set_family out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << c); ++mask) {
    auto s = mask_to_set(mask, c);
    if (keep(s)) out.insert(std::move(s));
  }
  return out;
}

inline set_family as_family(const set_list& sets) { return {sets.begin(), sets.end()}; }

inline set_family oracle_bounded_range(uint32_t a, uint32_t b) {
  return filter_subsets(a, [&](const auto& s) { return s.empty() || s.back() - s.front() <= b; });
}

inline set_family oracle_bounded_card(uint32_t a, uint32_t b) {
  return filter_subsets(a, [&](const auto& s) { return s.size() <= b; });
}

inline set_family oracle_subset_sum(const std::vector<uint64_t>& w, uint64_t cap) {
  return filter_subsets(static_cast<uint32_t>(w.size()), [&](const auto& s) {
    uint64_t sum = 0;
    for (element e : s) sum += w[e - 1];
    return sum <= cap;
  });
}

// independent edge sets by pairwise endpoint check
inline set_family oracle_matchings(const graph& g) {
  const auto m = static_cast<uint32_t>(g.edges.size());
  return filter_subsets(m, [&](const auto& s) {
    for (size_t i = 0; i < s.size(); ++i) {
      for (size_t j = i + 1; j < s.size(); ++j) {
        const auto [a, b] = g.edges[s[i] - 1];
        const auto [c, d] = g.edges[s[j] - 1];
        if (a == c || a == d || b == c || b == d) return false;
      }
    }
    return true;
  });
}

// row-by-row backtracking; cells numbered row-major from 1
inline set_family oracle_nqueens(uint32_t n) {
  set_family out;
  std::vector<int> col_of_row(n, -1);
  auto safe = [&](uint32_t r, int c) {
    for (uint32_t p = 0; p < r; ++p) {
      const int pc = col_of_row[p];
      if (pc == c || std::abs(pc - c) == static_cast<int>(r - p)) return false;
    }
    return true;
  };
  std::function<void(uint32_t)> place = [&](uint32_t r) {
    if (r == n) {
      std::vector<element> s;
      for (uint32_t p = 0; p < n; ++p) s.push_back(p * n + static_cast<element>(col_of_row[p]) + 1);
      out.insert(s);
      return;
    }
    for (int c = 0; c < static_cast<int>(n); ++c) {
      if (!safe(r, c)) continue;
      col_of_row[r] = c;
      place(r + 1);
    }
    col_of_row[r] = -1;
  };
  place(0);
  return out;
}

// Simple paths from (n-1, 0) to (0, n-1) found by a coordinate DFS from the
// far corner; edge ids recomputed from coordinates.
inline set_family oracle_grid_paths(uint32_t n) {
  auto right_id = [n](uint32_t r, uint32_t c) {
    // edges before vertex (r, c): full rows above have (n-1) + n edges each
    uint32_t before = r * (2 * n - 1) + c * 2;
    if (r == n - 1) before = r * (2 * n - 1) + c;  // last row has no down edges
    return before + 1;
  };
  auto down_id = [n](uint32_t r, uint32_t c) { return r * (2 * n - 1) + c * 2 + (c + 1 < n ? 1 : 0) + 1; };
  auto edge_between = [&](uint32_t r1, uint32_t c1, uint32_t r2, uint32_t c2) -> element {
    if (r1 == r2) return right_id(r1, std::min(c1, c2));
    return down_id(std::min(r1, r2), c1);
  };
  set_family out;
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  std::vector<element> path;
  std::function<void(uint32_t, uint32_t)> go = [&](uint32_t r, uint32_t c) {
    if (r == n - 1 && c == 0) {
      auto s = path;
      std::sort(s.begin(), s.end());
      out.insert(s);
      return;
    }
    seen[r][c] = true;
    const int dr[] = {1, 0, -1, 0};
    const int dc[] = {0, -1, 0, 1};
    for (int d = 0; d < 4; ++d) {
      const int nr = static_cast<int>(r) + dr[d];
      const int nc = static_cast<int>(c) + dc[d];
      if (nr < 0 || nc < 0 || nr >= static_cast<int>(n) || nc >= static_cast<int>(n)) continue;
      if (seen[nr][nc]) continue;
      path.push_back(edge_between(r, c, nr, nc));
      go(nr, nc);
      path.pop_back();
    }
    seen[r][c] = false;
  };
  go(0, n - 1);
  return out;
}

inline big_count binomial_prefix(uint32_t a, uint32_t b) {
  big_count total = 0;
  big_count term = 1;  // C(a, 0)
  for (uint32_t k = 0; k <= b; ++k) {
    total += term;
    term = term * (a - k) / (k + 1);
  }
  return total;
}

}  // namespace topzdd::testing
