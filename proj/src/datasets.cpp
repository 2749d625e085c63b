#include "semrob/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "semrob/embedding.hpp"
#include "semrob/rng.hpp"

namespace semrob {

Corpus load_corpus(const std::string& path, CorpusLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open corpus " + path);
  return load_corpus(in, path, report);
}

Corpus load_corpus(std::istream& in, const std::string& name, CorpusLoadReport* report) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  auto note = [&](const std::string& reason) {
    if (report) report->malformed.push_back(name + ":" + std::to_string(lineno) + ": " + reason);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_char(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      note("expected label<TAB>text[<TAB>provenance]");
      continue;
    }
    LabeledText sample;
    try {
      sample.label = parse_label(fields[0]);
    } catch (const Error& e) {
      throw Error(e.code(), name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    sample.words = tokenize(fields[1]);
    if (sample.words.empty()) {
      note("empty text");
      continue;
    }
    sample.source = fields.size() == 3 ? trim(fields[2]) : "base";
    corpus.samples.push_back(std::move(sample));
  }
  if (corpus.empty()) {
    throw Error(ErrorCode::EmptyCorpus, name + " contains no samples");
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path, bool with_provenance,
                 const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write corpus " + path);
  for (const auto& h : header_lines) out << "# " << h << "\n";
  for (const auto& s : corpus.samples) {
    out << label_name(s.label) << "\t";
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      if (i) out << ' ';
      out << s.words[i];
    }
    if (with_provenance) out << "\t" << (s.source.empty() ? "base" : s.source);
    out << "\n";
  }
}

Corpus augment(const Corpus& base, const Corpus& rule_corpus, const AugmentSpec& spec) {
  Corpus out;
  out.split_tag = base.split_tag;
  out.samples.reserve(base.size() + spec.factor * rule_corpus.size());
  out.samples = base.samples;
  for (std::size_t copy = 0; copy < spec.factor; ++copy) {
    out.samples.insert(out.samples.end(), rule_corpus.samples.begin(),
                       rule_corpus.samples.end());
  }
  rng::Engine eng(spec.shuffle_seed);
  rng::shuffle(out.samples, eng);
  return out;
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::InvalidFraction, "fraction must be in (0, 1)");
  }
  // Stratify: shuffle each class's index list, cut at its quota. Quotas use
  // largest-remainder rounding against the overall target so the split sizes
  // come out right even when per-class quotas are not integral.
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_class[corpus.samples[i].label == kLabelPositive ? 1 : 0].push_back(i);
  }
  const auto target = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(corpus.size())));
  std::size_t take[2];
  double remainder[2];
  std::size_t floored = 0;
  for (int c = 0; c < 2; ++c) {
    const double quota = fraction * static_cast<double>(by_class[c].size());
    take[c] = static_cast<std::size_t>(quota);
    remainder[c] = quota - static_cast<double>(take[c]);
    floored += take[c];
  }
  for (std::size_t extra = 0; floored + extra < target;) {
    const int c = remainder[0] >= remainder[1] ? 0 : 1;
    if (take[c] < by_class[c].size()) {
      ++take[c];
      remainder[c] = -1.0;
      ++extra;
    } else {
      remainder[c] = -2.0;
    }
  }
  rng::Engine eng(seed);
  std::vector<std::size_t> first_idx;
  std::vector<std::size_t> second_idx;
  for (int c = 0; c < 2; ++c) {
    auto& cls = by_class[c];
    rng::shuffle(cls, eng);
    for (std::size_t k = 0; k < cls.size(); ++k) {
      (k < take[c] ? first_idx : second_idx).push_back(cls[k]);
    }
  }
  std::sort(first_idx.begin(), first_idx.end());
  std::sort(second_idx.begin(), second_idx.end());
  Corpus first;
  Corpus second;
  for (std::size_t i : first_idx) first.samples.push_back(corpus.samples[i]);
  for (std::size_t i : second_idx) second.samples.push_back(corpus.samples[i]);
  return {std::move(first), std::move(second)};
}

}  // namespace semrob
