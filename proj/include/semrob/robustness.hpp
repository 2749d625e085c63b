#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semrob/datasets.hpp"
#include "semrob/embedding.hpp"
#include "semrob/ibp.hpp"
#include "semrob/model.hpp"

// The assessment layer: discrete robustness checks against vocabulary
// substitutions, performance-gap verdicts between a base test set and
// rule-generated phenomenon sets, and population-level statistics.

namespace semrob {

// Base performance p and mean rule performance p' (both accuracies in [0,1]).
struct PerformancePair {
  double p = 0.0;
  double p_prime = 0.0;
  std::size_t n_base = 0;
  std::size_t n_rule = 0;
};

// p' >= max(0, p - tau): performance on rule samples may trail the base by
// at most tau (and may surpass it). Throws InvalidTau for tau < 0.
bool semantic_robustness(const PerformancePair& pair, double tau);

// Two-sided: max(0, p - tau) <= p' <= p + tau. Implies nothing the one-sided
// check does not already require on the lower side.
bool bounded_invariance(const PerformancePair& pair, double tau);

struct DiscreteCheckResult {
  bool robust = true;
  std::uint64_t sequences_checked = 0;
  std::optional<std::vector<std::string>> counterexample;  // first label-changing sequence
};

// Enumerates the discrete neighborhood of `words` (per-word vocabulary
// neighbors within spec.epsilon) and checks the model's prediction never
// moves. The verdict is relative to the model's own prediction on the
// original text.
DiscreteCheckResult check_discrete_robustness(
    const Classifier& net, const EmbeddingTable& table, const std::vector<std::string>& words,
    const BallSpec& spec, std::uint64_t cap = SentenceEnumerator::kDefaultSentenceCap);

// Two-sided permutation test on the difference of means. Enumerates all
// group assignments exactly when there are at most `resamples` of them,
// otherwise draws `resamples` random assignments (seeded). Add-one rule on
// the Monte-Carlo path keeps the test valid. Throws InsufficientSamples
// when either side has fewer than 2 values.
double significance_test(const std::vector<double>& acc_a, const std::vector<double>& acc_b,
                         std::size_t resamples = 10000, std::uint64_t seed = 0);

inline constexpr double kSignificanceAlpha = 0.05;
inline constexpr double kDefaultTau = 0.05;

// --- prediction files: TSV sample_id<TAB>label[<TAB>score] ---
// ids are the 0-based sample positions of the corpus the predictions
// describe; they must match it exactly (IdMismatch otherwise).
struct PredictionFile {
  std::vector<std::size_t> ids;
  std::vector<int> labels;
  std::vector<std::optional<double>> scores;

  std::size_t size() const { return ids.size(); }
};

PredictionFile load_predictions(const std::string& path);
void save_predictions(const PredictionFile& preds, const std::string& path,
                      const std::vector<std::string>& header_lines = {});

// Throws IdMismatch unless preds.ids is exactly 0..corpus_size-1.
void check_alignment(const PredictionFile& preds, std::size_t corpus_size,
                     const std::string& what);

double accuracy_against(const PredictionFile& preds, const Corpus& corpus);

// One phenomenon's verdicts.
struct PhenomenonReport {
  std::string phenomenon;
  PerformancePair pair;
  double tau = kDefaultTau;
  bool semantic_robust = false;
  bool bounded_invariant = false;
  std::optional<double> p_value;  // set by population comparisons
  std::string significance_method;
};

// Compares aligned prediction sets: p is the accuracy on the base corpus,
// p' the accuracy on the rule corpus. Throws IdMismatch, EmptyCorpus.
PhenomenonReport assess_global(const PredictionFile& base_preds, const PredictionFile& rule_preds,
                               const Corpus& base_corpus, const Corpus& rule_corpus, double tau,
                               const std::string& phenomenon);

// --- population comparison (mean +- std tables with significance stars) ---

struct Population {
  std::string name;
  // metric -> one value per model; metric order fixed by first insertion
  std::vector<std::pair<std::string, std::vector<double>>> metrics;

  const std::vector<double>* find_metric(const std::string& metric) const;
};

struct PopulationCell {
  double mean = 0.0;
  double stddev = 0.0;  // sample std (n-1)
  bool starred = false;
  std::size_t n = 0;
};

struct PopulationTable {
  std::vector<std::string> metrics;      // row order
  std::vector<std::string> populations;  // column order
  std::vector<std::vector<PopulationCell>> cells;  // [metric][population]
};

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);  // sample std, 0 for n < 2

// Each population after the first is tested against the first per metric;
// when the permutation p-value clears alpha the higher-mean side of the
// pair is starred. Throws InsufficientSamples for fewer than 2 populations
// or any metric list shorter than 2.
PopulationTable compare_populations(const std::vector<Population>& populations,
                                    double alpha = kSignificanceAlpha,
                                    std::size_t resamples = 10000, std::uint64_t seed = 0);

std::string render_population_table(const PopulationTable& table);

}  // namespace semrob
