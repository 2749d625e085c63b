#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "semrob/template_engine.hpp"

// Corpus loading and the augmentation protocol: mixing a base corpus with
// `factor` replicated copies of a rule-generated corpus.
//
// Corpus files are TSV `label<TAB>text[<TAB>provenance]`, one sample per
// line, '#' comments ignored. Text is tokenized with the embedding rules
// (lowercase, punctuation split off) on load.

namespace semrob {

struct Corpus {
  std::vector<LabeledText> samples;
  std::string split_tag;  // "train" | "test" | ""

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct AugmentSpec {
  std::size_t factor = 1;  // replication count of the rule corpus
  std::uint64_t shuffle_seed = 0;
};

struct CorpusLoadReport {
  std::vector<std::string> malformed;  // "<file>:<line>: reason", skipped lines
};

// Throws EmptyCorpus (no valid samples) and UnknownLabel; structurally
// malformed lines (missing tab, empty text) are skipped and reported.
Corpus load_corpus(const std::string& path, CorpusLoadReport* report = nullptr);
Corpus load_corpus(std::istream& in, const std::string& name,
                   CorpusLoadReport* report = nullptr);

// Sample provenance (LabeledText::source) defaults to "base"; rule
// generators tag theirs "rule:<phenomenon>". The third TSV column round-trips
// it.
void save_corpus(const Corpus& corpus, const std::string& path, bool with_provenance = false,
                 const std::vector<std::string>& header_lines = {});

// base samples plus `factor` copies of every rule sample, globally shuffled
// under the seed. Provenance tags are preserved so phenomenon subsets stay
// recoverable.
Corpus augment(const Corpus& base, const Corpus& rule_corpus, const AugmentSpec& spec);

// Label-stratified split: first part receives `fraction` of each class
// (rounded down, at least one sample when the class is non-empty), the
// second the rest. Disjoint, union-preserving, seed-deterministic.
// Throws InvalidFraction unless 0 < fraction < 1.
std::pair<Corpus, Corpus> split(const Corpus& corpus, double fraction, std::uint64_t seed);

}  // namespace semrob
