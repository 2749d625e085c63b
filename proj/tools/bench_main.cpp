// Benchmark of the OpenMP kernels against their serial references. Checks
// that the outputs agree exactly, then reports wall time and speedup.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <string>

#include "semrob/kernels.hpp"
#include "semrob/model.hpp"
#include "semrob/rng.hpp"

using namespace semrob;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

EmbeddingTable make_table(std::size_t n, std::size_t dim) {
  rng::Engine eng(1234);
  std::vector<std::string> vocab;
  std::vector<std::vector<float>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    vocab.push_back("w" + std::to_string(i));
    std::vector<float> row(dim);
    for (auto& v : row) v = static_cast<float>(rng::uniform(eng, -1.0, 1.0));
    rows.push_back(std::move(row));
  }
  return EmbeddingTable::from_rows(std::move(vocab), std::move(rows));
}

void report(const std::string& name, double serial_s, double parallel_s, bool agree) {
  std::cout << std::left << std::setw(28) << name << std::fixed << std::setprecision(4)
            << "serial " << std::setw(9) << serial_s << "omp " << std::setw(9) << parallel_s
            << "speedup " << std::setprecision(2) << serial_s / parallel_s
            << (agree ? "" : "  MISMATCH") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t vocab = 4000;
  std::size_t dim = 50;
  std::size_t samples = 4000;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const std::string value = argv[i + 1];
    if (flag == "--vocab") vocab = std::stoul(value);
    if (flag == "--dim") dim = std::stoul(value);
    if (flag == "--samples") samples = std::stoul(value);
  }
  std::cout << "threads: " << kernels::max_threads() << ", vocab " << vocab << ", dim " << dim
            << "\n";

  const EmbeddingTable table = make_table(vocab, dim);
  rng::Engine eng(99);

  {
    std::vector<float> query(dim);
    for (auto& v : query) v = static_cast<float>(rng::uniform(eng, -1.0, 1.0));
    std::vector<double> a(table.size());
    std::vector<double> b(table.size());
    auto t0 = Clock::now();
    for (int rep = 0; rep < 50; ++rep) {
      kernels::distance_scan_serial(table, query, Norm::l2, a);
    }
    const double serial_s = seconds_since(t0);
    t0 = Clock::now();
    for (int rep = 0; rep < 50; ++rep) {
      kernels::distance_scan_omp(table, query, Norm::l2, b);
    }
    const double parallel_s = seconds_since(t0);
    report("distance_scan (50x)", serial_s, parallel_s, a == b);
  }

  {
    auto t0 = Clock::now();
    const double ds = kernels::diameter_serial(table, Norm::l2);
    const double serial_s = seconds_since(t0);
    t0 = Clock::now();
    const double dp = kernels::diameter_omp(table, Norm::l2);
    const double parallel_s = seconds_since(t0);
    report("diameter", serial_s, parallel_s, ds == dp);
  }

  {
    // batch prediction across a corpus of random inputs
    const Classifier net = Classifier::init(25, dim, {32, 32}, 2, 7);
    std::vector<SampleT<float>> data(samples);
    for (auto& s : data) {
      s.x.resize(net.input_size());
      for (auto& v : s.x) v = static_cast<float>(rng::uniform(eng, -1.0, 1.0));
      s.label = 0;
    }
    std::vector<int> serial_preds(data.size());
    std::vector<int> parallel_preds(data.size());
    auto t0 = Clock::now();
    kernels::parallel_for(data.size(), false,
                          [&](std::size_t i) { serial_preds[i] = net.predict(data[i].x); });
    const double serial_s = seconds_since(t0);
    t0 = Clock::now();
    kernels::parallel_for(data.size(), true,
                          [&](std::size_t i) { parallel_preds[i] = net.predict(data[i].x); });
    const double parallel_s = seconds_since(t0);
    report("batch_predict", serial_s, parallel_s, serial_preds == parallel_preds);
  }

  return 0;
}
