#include "semrob/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "semrob/rng.hpp"

namespace semrob {

bool semantic_robustness(const PerformancePair& pair, double tau) {
  if (tau < 0) throw Error(ErrorCode::InvalidTau, "tau must be >= 0");
  return pair.p_prime >= std::max(0.0, pair.p - tau);
}

bool bounded_invariance(const PerformancePair& pair, double tau) {
  if (tau < 0) throw Error(ErrorCode::InvalidTau, "tau must be >= 0");
  return pair.p_prime >= std::max(0.0, pair.p - tau) && pair.p_prime <= pair.p + tau;
}

DiscreteCheckResult check_discrete_robustness(const Classifier& net,
                                              const EmbeddingTable& table,
                                              const std::vector<std::string>& words,
                                              const BallSpec& spec, std::uint64_t cap) {
  const EmbeddedText center = embed_text(table, words, net.seq_len());
  const int base_pred = net.predict(center.flat());
  SentenceEnumerator en(table, center, spec, cap);
  DiscreteCheckResult res;
  while (auto candidate = en.next()) {
    ++res.sequences_checked;
    const EmbeddedText emb = embed_text(table, *candidate, net.seq_len());
    if (net.predict(emb.flat()) != base_pred) {
      res.robust = false;
      res.counterexample = std::move(*candidate);
      return res;
    }
  }
  return res;
}

namespace {

double mean_diff(const std::vector<double>& pool, const std::vector<char>& in_a,
                 std::size_t n_a) {
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (in_a[i] ? sum_a : sum_b) += pool[i];
  }
  return sum_a / static_cast<double>(n_a) -
         sum_b / static_cast<double>(pool.size() - n_a);
}

// Number of n_a-subsets of n items, saturating at limit + 1.
std::uint64_t choose_saturating(std::size_t n, std::size_t k, std::uint64_t limit) {
  if (k > n) return 0;
  if (n - k < k) k = n - k;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t num = n - i;
    if (c > UINT64_MAX / num) return limit + 1;
    c = c * num / (i + 1);  // exact: C(n,i) * (n-i) is divisible by i+1
    if (c > limit) return limit + 1;
  }
  return c;
}

}  // namespace

double significance_test(const std::vector<double>& acc_a, const std::vector<double>& acc_b,
                         std::size_t resamples, std::uint64_t seed) {
  if (acc_a.size() < 2 || acc_b.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "need at least 2 values per group");
  }
  std::vector<double> pool = acc_a;
  pool.insert(pool.end(), acc_b.begin(), acc_b.end());
  const std::size_t n = pool.size();
  const std::size_t n_a = acc_a.size();
  std::vector<char> in_a(n, 0);
  std::fill(in_a.begin(), in_a.begin() + n_a, 1);
  const double observed = std::abs(mean_diff(pool, in_a, n_a));
  const double tol = 1e-12 * (1.0 + observed);  // float-noise guard on ties

  const std::uint64_t total = choose_saturating(n, n_a, resamples);
  if (total <= resamples) {
    // Exact: walk every assignment of n_a slots (lexicographic combinations).
    std::vector<std::size_t> comb(n_a);
    for (std::size_t i = 0; i < n_a; ++i) comb[i] = i;
    std::uint64_t hits = 0;
    std::uint64_t count = 0;
    while (true) {
      std::fill(in_a.begin(), in_a.end(), 0);
      for (std::size_t i : comb) in_a[i] = 1;
      if (std::abs(mean_diff(pool, in_a, n_a)) >= observed - tol) ++hits;
      ++count;
      // next combination in lexicographic order
      bool advanced = false;
      std::size_t i = n_a;
      while (i-- > 0) {
        if (comb[i] != i + n - n_a) {
          ++comb[i];
          for (std::size_t j = i + 1; j < n_a; ++j) comb[j] = comb[j - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        return static_cast<double>(hits) / static_cast<double>(count);
      }
    }
  }

  // Monte Carlo with the add-one rule (the observed assignment counts).
  rng::Engine eng(seed);
  std::uint64_t hits = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    rng::shuffle(pool, eng);
    std::fill(in_a.begin(), in_a.end(), 0);
    std::fill(in_a.begin(), in_a.begin() + n_a, 1);
    if (std::abs(mean_diff(pool, in_a, n_a)) >= observed - tol) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(resamples + 1);
}

PredictionFile load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open prediction file " + path);
  PredictionFile preds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_char(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorCode::IoError,
                  path + ":" + std::to_string(lineno) + ": expected id<TAB>label[<TAB>score]");
    }
    try {
      preds.ids.push_back(static_cast<std::size_t>(std::stoull(trim(fields[0]))));
    } catch (const std::exception&) {
      throw Error(ErrorCode::IoError,
                  path + ":" + std::to_string(lineno) + ": bad sample id '" + fields[0] + "'");
    }
    preds.labels.push_back(parse_label(fields[1]));
    if (fields.size() == 3 && !trim(fields[2]).empty()) {
      preds.scores.push_back(std::stod(trim(fields[2])));
    } else {
      preds.scores.push_back(std::nullopt);
    }
  }
  // ids unique
  std::vector<std::size_t> sorted = preds.ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::IdMismatch, path + ": duplicate sample ids");
  }
  return preds;
}

void save_predictions(const PredictionFile& preds, const std::string& path,
                      const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write prediction file " + path);
  for (const auto& h : header_lines) out << "# " << h << "\n";
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out << preds.ids[i] << "\t" << label_name(preds.labels[i]);
    if (preds.scores[i]) {
      out << "\t" << std::setprecision(6) << std::fixed << *preds.scores[i];
    }
    out << "\n";
  }
}

void check_alignment(const PredictionFile& preds, std::size_t corpus_size,
                     const std::string& what) {
  if (preds.size() != corpus_size) {
    throw Error(ErrorCode::IdMismatch,
                what + ": " + std::to_string(preds.size()) + " predictions for " +
                    std::to_string(corpus_size) + " samples");
  }
  std::vector<char> seen(corpus_size, 0);
  for (std::size_t id : preds.ids) {
    if (id >= corpus_size || seen[id]) {
      throw Error(ErrorCode::IdMismatch, what + ": ids do not cover 0.." +
                                             std::to_string(corpus_size - 1) + " exactly");
    }
    seen[id] = 1;
  }
}

double accuracy_against(const PredictionFile& preds, const Corpus& corpus) {
  check_alignment(preds, corpus.size(), "predictions");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds.labels[i] == corpus.samples[preds.ids[i]].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

PhenomenonReport assess_global(const PredictionFile& base_preds,
                               const PredictionFile& rule_preds, const Corpus& base_corpus,
                               const Corpus& rule_corpus, double tau,
                               const std::string& phenomenon) {
  if (base_corpus.empty() || rule_corpus.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "assessment needs non-empty corpora");
  }
  PhenomenonReport report;
  report.phenomenon = phenomenon;
  report.tau = tau;
  report.pair.p = accuracy_against(base_preds, base_corpus);
  report.pair.p_prime = accuracy_against(rule_preds, rule_corpus);
  report.pair.n_base = base_corpus.size();
  report.pair.n_rule = rule_corpus.size();
  report.semantic_robust = semantic_robustness(report.pair, tau);
  report.bounded_invariant = bounded_invariance(report.pair, tau);
  return report;
}

const std::vector<double>* Population::find_metric(const std::string& metric) const {
  for (const auto& [name, values] : metrics) {
    if (name == metric) return &values;
  }
  return nullptr;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

PopulationTable compare_populations(const std::vector<Population>& populations, double alpha,
                                    std::size_t resamples, std::uint64_t seed) {
  if (populations.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "need at least 2 populations");
  }
  PopulationTable table;
  for (const auto& pop : populations) table.populations.push_back(pop.name);
  for (const auto& [metric, values] : populations.front().metrics) {
    (void)values;
    table.metrics.push_back(metric);
  }
  for (const auto& metric : table.metrics) {
    std::vector<PopulationCell> row(populations.size());
    const std::vector<double>* baseline = populations.front().find_metric(metric);
    for (std::size_t p = 0; p < populations.size(); ++p) {
      const std::vector<double>* values = populations[p].find_metric(metric);
      if (!values || values->size() < 2) {
        throw Error(ErrorCode::InsufficientSamples,
                    "population " + populations[p].name + " lacks metric " + metric);
      }
      row[p].mean = mean_of(*values);
      row[p].stddev = stddev_of(*values);
      row[p].n = values->size();
    }
    for (std::size_t p = 1; p < populations.size(); ++p) {
      const std::vector<double>* values = populations[p].find_metric(metric);
      const double pv = significance_test(*baseline, *values, resamples, seed);
      if (pv <= alpha) {
        // star the better side of the pair
        if (row[p].mean > row[0].mean) {
          row[p].starred = true;
        } else {
          row[0].starred = true;
        }
      }
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

std::string render_population_table(const PopulationTable& table) {
  std::ostringstream out;
  out << std::setprecision(4) << std::fixed;
  std::size_t name_width = 6;
  for (const auto& m : table.metrics) name_width = std::max(name_width, m.size());
  out << std::left << std::setw(static_cast<int>(name_width) + 2) << "metric";
  for (const auto& p : table.populations) {
    out << std::setw(22) << p;
  }
  out << "\n";
  for (std::size_t m = 0; m < table.metrics.size(); ++m) {
    out << std::setw(static_cast<int>(name_width) + 2) << table.metrics[m];
    for (const auto& cell : table.cells[m]) {
      std::ostringstream v;
      v << std::setprecision(4) << std::fixed << cell.mean << " +- " << cell.stddev
        << (cell.starred ? " *" : "");
      out << std::setw(22) << v.str();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace semrob
