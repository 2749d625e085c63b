#include "semrob/rng.hpp"

#include <algorithm>
#include <unordered_set>

namespace semrob::rng {

std::vector<std::uint64_t> sample_distinct(Engine& eng, std::uint64_t n, std::uint64_t k) {
  if (k > n) k = n;
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  // Floyd: for j in [n-k, n), pick t in [0, j]; insert t unless taken, else j.
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uint64_t t = below(eng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace semrob::rng
