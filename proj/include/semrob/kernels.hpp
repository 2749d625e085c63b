#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "semrob/embedding.hpp"

// Data-parallel inner loops, each in a serial reference version and an
// OpenMP version. The pairs are bit-identical: the scan writes disjoint
// per-row slots and the diameter reduces with max, which is order-
// insensitive. Tests check serial == omp exactly; the bench tool compares
// their throughput.

namespace semrob::kernels {

// Distance from `query` to every table row, written to out[0..size).
void distance_scan_serial(const EmbeddingTable& table, std::span<const float> query,
                          Norm norm, std::span<double> out);
void distance_scan_omp(const EmbeddingTable& table, std::span<const float> query,
                       Norm norm, std::span<double> out);

// Max pairwise distance over all vocabulary pairs.
double diameter_serial(const EmbeddingTable& table, Norm norm);
double diameter_omp(const EmbeddingTable& table, Norm norm);

// Runs fn(i) for i in [0, n); fn writes only to slot i of its outputs.
// Results do not depend on the schedule.
template <typename Fn>
void parallel_for(std::size_t n, bool parallel, Fn&& fn) {
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

int max_threads();
void set_threads(int jobs);  // 0 keeps the OpenMP default

}  // namespace semrob::kernels
