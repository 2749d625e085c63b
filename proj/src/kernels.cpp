#include "semrob/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semrob::kernels {

namespace {

// Row distances against the rest of the table, starting after `row`.
double max_distance_from(const EmbeddingTable& table, std::size_t row, Norm norm) {
  double best = 0.0;
  const auto a = table.vector(row);
  for (std::size_t j = row + 1; j < table.size(); ++j) {
    best = std::max(best, lp_distance(a, table.vector(j), norm));
  }
  return best;
}

}  // namespace

void distance_scan_serial(const EmbeddingTable& table, std::span<const float> query,
                          Norm norm, std::span<double> out) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    out[i] = lp_distance(query, table.vector(i), norm);
  }
}

void distance_scan_omp(const EmbeddingTable& table, std::span<const float> query,
                       Norm norm, std::span<double> out) {
  const long long n = static_cast<long long>(table.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    out[i] = lp_distance(query, table.vector(static_cast<std::size_t>(i)), norm);
  }
}

double diameter_serial(const EmbeddingTable& table, Norm norm) {
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    best = std::max(best, max_distance_from(table, i, norm));
  }
  return best;
}

double diameter_omp(const EmbeddingTable& table, Norm norm) {
  double best = 0.0;
  const long long n = static_cast<long long>(table.size());
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
  for (long long i = 0; i < n - 1; ++i) {
    best = std::max(best, max_distance_from(table, static_cast<std::size_t>(i), norm));
  }
  return best;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

}  // namespace semrob::kernels
