#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semrob/common.hpp"

// Word embeddings and the perturbation geometry built on them: L_p distances,
// continuous epsilon-balls around embedded texts, and their discrete
// counterparts (vocabulary word sequences inside the ball).

namespace semrob {

enum class Norm { l1, l2, linf };

Norm parse_norm(std::string_view s);  // "1", "2", "inf" — throws NormNotSupported
const char* norm_name(Norm n);

enum class BallScope { per_word, whole_sequence };

struct BallSpec {
  double epsilon = 0.0;  // >= 0
  Norm norm = Norm::linf;
  BallScope scope = BallScope::whole_sequence;
};

// Immutable after load; all queries are read-only and thread-safe.
class EmbeddingTable {
 public:
  // Text file, one `word f1 f2 ... fd` entry per line, consistent dimension,
  // '#' comments ignored. Throws DimensionMismatch, DuplicateWord,
  // NonFiniteValue, IoError.
  static EmbeddingTable load(const std::string& path);
  static EmbeddingTable load(std::istream& in, const std::string& name);

  // Builds a table in memory (tests, generators). Same validation as load.
  static EmbeddingTable from_rows(std::vector<std::string> vocab,
                                  std::vector<std::vector<float>> rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::string& word(std::size_t i) const { return vocab_[i]; }
  std::span<const float> vector(std::size_t i) const {
    return {vectors_.data() + i * dim_, dim_};
  }
  std::optional<std::size_t> find(std::string_view word) const;

  // Vector-equal word groups (size >= 2 each). Non-injective tables are
  // usable; callers surface the warning in their reports.
  const std::vector<std::vector<std::size_t>>& duplicate_groups() const {
    return duplicate_groups_;
  }
  bool injective() const { return duplicate_groups_.empty(); }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> vocab_;
  std::vector<float> vectors_;  // row-major size() x dim()
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> duplicate_groups_;

  void finalize();  // builds index_, validates, detects duplicate vectors
};

// Embedded text x: `length` rows of `dim` floats, row-major. Rows beyond the
// source words are zero padding; OOV words map to the zero vector and are
// flagged, not errors.
struct EmbeddedText {
  std::vector<std::string> words;  // source words (pre-pad/truncate); may be empty
  std::vector<float> matrix;       // length * dim
  std::size_t length = 0;
  std::size_t dim = 0;
  std::vector<bool> oov;  // one flag per source word kept

  std::span<const float> row(std::size_t i) const { return {matrix.data() + i * dim, dim}; }
  std::span<const float> flat() const { return {matrix.data(), matrix.size()}; }
  bool has_words() const { return !words.empty(); }
};

// Lowercases ASCII, splits punctuation characters into separate tokens, then
// splits on whitespace. Bytes >= 0x80 pass through untouched.
std::vector<std::string> tokenize(std::string_view text);

EmbeddedText embed_text(const EmbeddingTable& table, const std::vector<std::string>& words,
                        std::size_t length);

// Standard L_p distance; Linf is the max coordinate gap. Throws DimensionMismatch.
double lp_distance(std::span<const float> a, std::span<const float> b, Norm norm);

// per_word: every row pair within epsilon. whole_sequence: distance over the
// flattened matrices within epsilon.
bool ball_contains(const EmbeddedText& center, const EmbeddedText& candidate,
                   const BallSpec& spec);

struct Neighbor {
  std::size_t index;
  double distance;
};

// Exact brute-force scan over the vocabulary: every word within
// spec.epsilon of `word` under spec.norm, the word itself included, in
// vocabulary order. Throws WordNotInVocab.
std::vector<Neighbor> dball_neighbors(const EmbeddingTable& table, const std::string& word,
                                      const BallSpec& spec, bool parallel = false);

// Streams every word sequence in the Cartesian product of per-word neighbor
// sets. Exact for Linf in whole-sequence scope (the constraint factorizes
// per word); L1/L2 are supported in per_word scope only — whole_sequence
// with p != inf throws NormNotSupported. OOV source words have no neighbors
// besides themselves. Total count above `cap` throws ExpansionCapExceeded.
class SentenceEnumerator {
 public:
  SentenceEnumerator(const EmbeddingTable& table, const EmbeddedText& text,
                     const BallSpec& spec, std::uint64_t cap = kDefaultSentenceCap);

  std::uint64_t total() const { return total_; }
  // Next sequence in lexicographic (per-position neighbor index) order, or
  // nullopt when exhausted. The first result is always the original sentence
  // only when epsilon = 0; otherwise order follows vocabulary indices.
  std::optional<std::vector<std::string>> next();

  static constexpr std::uint64_t kDefaultSentenceCap = 1000000;

 private:
  const EmbeddingTable& table_;
  std::vector<std::vector<std::size_t>> choices_;  // per position: vocab indices (or npos for OOV)
  std::vector<std::string> source_words_;
  std::vector<std::size_t> cursor_;
  std::uint64_t total_ = 1;
  bool done_ = false;
};

// Max pairwise L_p distance over the vocabulary, exact O(|V|^2 d).
// Throws VocabTooSmall for |V| < 2.
double diameter(const EmbeddingTable& table, Norm norm, bool parallel = true);

}  // namespace semrob
