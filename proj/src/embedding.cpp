#include "semrob/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "semrob/kernels.hpp"

namespace semrob {

Norm parse_norm(std::string_view s) {
  const std::string v = to_lower(trim(s));
  if (v == "1" || v == "l1") return Norm::l1;
  if (v == "2" || v == "l2") return Norm::l2;
  if (v == "inf" || v == "linf" || v == "infinity") return Norm::linf;
  throw Error(ErrorCode::NormNotSupported, "norm must be 1, 2 or inf, got '" + v + "'");
}

const char* norm_name(Norm n) {
  switch (n) {
    case Norm::l1: return "1";
    case Norm::l2: return "2";
    case Norm::linf: return "inf";
  }
  return "?";
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open embedding file " + path);
  return load(in, path);
}

EmbeddingTable EmbeddingTable::load(std::istream& in, const std::string& name) {
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<float> row;
    double value;
    while (ls >> value) row.push_back(static_cast<float>(value));
    if (!ls.eof()) {
      throw Error(ErrorCode::NonFiniteValue,
                  name + ":" + std::to_string(lineno) + ": unparseable value");
    }
    if (table.dim_ == 0) {
      if (row.empty()) {
        throw Error(ErrorCode::DimensionMismatch,
                    name + ":" + std::to_string(lineno) + ": entry has no values");
      }
      table.dim_ = row.size();
    } else if (row.size() != table.dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  name + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(table.dim_) + " values, got " + std::to_string(row.size()));
    }
    table.vocab_.push_back(word);
    table.vectors_.insert(table.vectors_.end(), row.begin(), row.end());
  }
  table.finalize();
  return table;
}

EmbeddingTable EmbeddingTable::from_rows(std::vector<std::string> vocab,
                                         std::vector<std::vector<float>> rows) {
  if (vocab.size() != rows.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vocab/rows size mismatch");
  }
  EmbeddingTable table;
  table.vocab_ = std::move(vocab);
  for (const auto& row : rows) {
    if (table.dim_ == 0) table.dim_ = row.size();
    if (row.size() != table.dim_ || row.empty()) {
      throw Error(ErrorCode::DimensionMismatch, "inconsistent row dimension");
    }
    table.vectors_.insert(table.vectors_.end(), row.begin(), row.end());
  }
  table.finalize();
  return table;
}

void EmbeddingTable::finalize() {
  if (vocab_.empty() || dim_ == 0) {
    throw Error(ErrorCode::DimensionMismatch, "embedding table is empty");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw Error(ErrorCode::DuplicateWord, "word '" + vocab_[i] + "' appears twice");
    }
  }
  for (float v : vectors_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, "embedding contains NaN or Inf");
    }
  }
  // Injectivity check: group rows by exact byte content.
  std::map<std::string, std::vector<std::size_t>> by_bytes;
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    std::string key(reinterpret_cast<const char*>(vectors_.data() + i * dim_),
                    dim_ * sizeof(float));
    by_bytes[key].push_back(i);
  }
  for (auto& [key, group] : by_bytes) {
    if (group.size() > 1) duplicate_groups_.push_back(group);
  }
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::string spaced;
  spaced.reserve(text.size() * 2);
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (uc < 0x80 && std::ispunct(uc)) {
      spaced.push_back(' ');
      spaced.push_back(c);
      spaced.push_back(' ');
    } else {
      spaced.push_back(static_cast<char>(uc < 0x80 ? std::tolower(uc) : uc));
    }
  }
  return split_whitespace(spaced);
}

EmbeddedText embed_text(const EmbeddingTable& table, const std::vector<std::string>& words,
                        std::size_t length) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "sequence length must be >= 1");
  EmbeddedText out;
  out.length = length;
  out.dim = table.dim();
  out.matrix.assign(length * table.dim(), 0.0f);
  const std::size_t kept = std::min(words.size(), length);
  out.words.assign(words.begin(), words.begin() + kept);
  out.oov.assign(kept, false);
  for (std::size_t i = 0; i < kept; ++i) {
    if (auto idx = table.find(words[i])) {
      const auto row = table.vector(*idx);
      std::copy(row.begin(), row.end(), out.matrix.begin() + i * table.dim());
    } else {
      out.oov[i] = true;  // stays the zero vector
    }
  }
  return out;
}

double lp_distance(std::span<const float> a, std::span<const float> b, Norm norm) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vectors of size " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  double acc = 0.0;
  switch (norm) {
    case Norm::l1:
      for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
      }
      return acc;
    case Norm::l2:
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
      }
      return std::sqrt(acc);
    case Norm::linf:
      for (std::size_t i = 0; i < a.size(); ++i) {
        acc = std::max(acc, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
      }
      return acc;
  }
  return acc;
}

bool ball_contains(const EmbeddedText& center, const EmbeddedText& candidate,
                   const BallSpec& spec) {
  if (center.length != candidate.length || center.dim != candidate.dim) {
    throw Error(ErrorCode::DimensionMismatch, "embedded texts differ in shape");
  }
  if (spec.epsilon < 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  if (spec.scope == BallScope::whole_sequence) {
    return lp_distance(center.flat(), candidate.flat(), spec.norm) <= spec.epsilon;
  }
  for (std::size_t i = 0; i < center.length; ++i) {
    if (lp_distance(center.row(i), candidate.row(i), spec.norm) > spec.epsilon) return false;
  }
  return true;
}

std::vector<Neighbor> dball_neighbors(const EmbeddingTable& table, const std::string& word,
                                      const BallSpec& spec, bool parallel) {
  if (spec.epsilon < 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  const auto idx = table.find(word);
  if (!idx) throw Error(ErrorCode::WordNotInVocab, "'" + word + "' not in vocabulary");
  std::vector<double> dist(table.size());
  if (parallel) {
    kernels::distance_scan_omp(table, table.vector(*idx), spec.norm, dist);
  } else {
    kernels::distance_scan_serial(table, table.vector(*idx), spec.norm, dist);
  }
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (dist[i] <= spec.epsilon) out.push_back({i, dist[i]});
  }
  return out;
}

SentenceEnumerator::SentenceEnumerator(const EmbeddingTable& table, const EmbeddedText& text,
                                       const BallSpec& spec, std::uint64_t cap)
    : table_(table) {
  if (!text.has_words()) {
    throw Error(ErrorCode::InvalidArgument,
                "sentence enumeration needs word provenance (embed the word list)");
  }
  if (spec.scope == BallScope::whole_sequence && spec.norm != Norm::linf) {
    throw Error(ErrorCode::NormNotSupported,
                "whole-sequence enumeration factorizes per word only under Linf");
  }
  source_words_ = text.words;
  BallSpec word_spec = spec;
  word_spec.scope = BallScope::per_word;
  for (std::size_t i = 0; i < source_words_.size(); ++i) {
    std::vector<std::size_t> options;
    if (!text.oov[i]) {
      for (const auto& n : dball_neighbors(table, source_words_[i], word_spec)) {
        options.push_back(n.index);
      }
    } else {
      options.push_back(static_cast<std::size_t>(-1));  // OOV keeps itself
    }
    total_ *= options.size();
    if (total_ > cap) {
      throw Error(ErrorCode::ExpansionCapExceeded,
                  "sentence neighborhood exceeds cap " + std::to_string(cap));
    }
    choices_.push_back(std::move(options));
  }
  cursor_.assign(choices_.size(), 0);
}

std::optional<std::vector<std::string>> SentenceEnumerator::next() {
  if (done_) return std::nullopt;
  std::vector<std::string> out(choices_.size());
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    const std::size_t pick = choices_[i][cursor_[i]];
    out[i] = pick == static_cast<std::size_t>(-1) ? source_words_[i] : table_.word(pick);
  }
  // odometer, last position fastest
  std::size_t pos = choices_.size();
  while (pos-- > 0) {
    if (++cursor_[pos] < choices_[pos].size()) break;
    cursor_[pos] = 0;
    if (pos == 0) done_ = true;
  }
  return out;
}

double diameter(const EmbeddingTable& table, Norm norm, bool parallel) {
  if (table.size() < 2) {
    throw Error(ErrorCode::VocabTooSmall, "diameter needs at least 2 words");
  }
  return parallel ? kernels::diameter_omp(table, norm) : kernels::diameter_serial(table, norm);
}

}  // namespace semrob
