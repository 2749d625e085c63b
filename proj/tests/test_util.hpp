#pragma once

#include <string>
#include <vector>

#include "semrob/embedding.hpp"
#include "semrob/model.hpp"
#include "semrob/rng.hpp"

namespace semrob::testutil {

// Random table with words w0..w{n-1}. Coordinates are drawn on a jittered
// grid, which keeps rows distinct (injective) with overwhelming margin.
inline EmbeddingTable random_table(rng::Engine& eng, std::size_t n, std::size_t dim,
                                   double scale = 1.0) {
  std::vector<std::string> vocab;
  std::vector<std::vector<float>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    vocab.push_back("w" + std::to_string(i));
    std::vector<float> row(dim);
    for (auto& v : row) v = static_cast<float>(rng::uniform(eng, -scale, scale));
    rows.push_back(std::move(row));
  }
  return EmbeddingTable::from_rows(std::move(vocab), std::move(rows));
}

template <typename T>
NetT<T> random_net(rng::Engine& eng, std::size_t seq_len, std::size_t emb_dim,
                   std::vector<std::size_t> hidden, std::size_t classes = 2) {
  return NetT<T>::init(seq_len, emb_dim, hidden, classes, eng());
}

template <typename T>
std::vector<T> random_input(rng::Engine& eng, std::size_t n, double scale = 1.0) {
  std::vector<T> x(n);
  for (auto& v : x) v = static_cast<T>(rng::uniform(eng, -scale, scale));
  return x;
}

}  // namespace semrob::testutil
