#include "semrob/template_engine.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "semrob/rng.hpp"

namespace semrob {

namespace {

// Expansion indices are mixed-radix numbers over the per-occurrence lexicon
// sizes, first occurrence most significant.
struct ExpansionSpace {
  std::vector<const Lexicon*> occurrence;  // one entry per placeholder occurrence
  std::uint64_t count = 1;
};

ExpansionSpace resolve(const Template& t, const LexiconMap& lexicons) {
  ExpansionSpace space;
  for (const auto& el : t.elements) {
    if (!el.is_placeholder) continue;
    auto it = lexicons.find(el.text);
    if (it == lexicons.end()) {
      throw Error(ErrorCode::UnresolvedToken,
                  "no lexicon for token '" + el.text + "' (template " +
                      (t.id.empty() ? "<anonymous>" : t.id) + ")");
    }
    space.occurrence.push_back(&it->second);
    const std::uint64_t size = it->second.words.size();
    if (space.count > UINT64_MAX / size) {
      throw Error(ErrorCode::ExpansionCapExceeded, "expansion count overflows");
    }
    space.count *= size;
  }
  return space;
}

LabeledText materialize(const Template& t, const ExpansionSpace& space, std::uint64_t index) {
  // Decode the mixed-radix index into one lexicon index per occurrence.
  std::vector<std::size_t> pick(space.occurrence.size(), 0);
  std::uint64_t rem = index;
  for (std::size_t i = space.occurrence.size(); i-- > 0;) {
    const std::uint64_t radix = space.occurrence[i]->words.size();
    pick[i] = static_cast<std::size_t>(rem % radix);
    rem /= radix;
  }
  LabeledText out;
  out.label = t.label;
  out.words.reserve(t.elements.size());
  std::size_t next = 0;
  for (const auto& el : t.elements) {
    if (el.is_placeholder) {
      out.words.push_back(space.occurrence[next]->words[pick[next]]);
      ++next;
    } else {
      out.words.push_back(el.text);
    }
  }
  std::ostringstream src;
  src << (t.id.empty() ? "template" : t.id) << "#" << index;
  out.source = src.str();
  return out;
}

}  // namespace

std::size_t Template::placeholder_count() const {
  std::size_t n = 0;
  for (const auto& el : elements) n += el.is_placeholder ? 1 : 0;
  return n;
}

std::vector<std::string> Template::placeholder_tokens() const {
  std::vector<std::string> out;
  for (const auto& el : elements) {
    if (el.is_placeholder) out.push_back(el.text);
  }
  return out;
}

Template parse_template(const std::string& line) {
  const auto fields = split_char(line, '\t');
  if (fields.size() != 3) {
    throw Error(ErrorCode::MalformedTemplate,
                "expected pattern<TAB>label<TAB>phenomenon, got " +
                    std::to_string(fields.size()) + " field(s)");
  }
  const std::string pattern = trim(fields[0]);
  if (pattern.empty()) {
    throw Error(ErrorCode::MalformedTemplate, "empty pattern");
  }

  Template t;
  t.label = parse_label(fields[1]);
  t.phenomenon = to_lower(trim(fields[2]));
  if (t.phenomenon.empty()) {
    throw Error(ErrorCode::MalformedTemplate, "empty phenomenon tag");
  }

  // Scan for @...@ spans; literal stretches between them split on whitespace.
  std::string literal;
  auto flush_literal = [&] {
    for (auto& word : split_whitespace(literal)) {
      t.elements.push_back({false, std::move(word)});
    }
    literal.clear();
  };
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] != '@') {
      literal.push_back(pattern[i]);
      ++i;
      continue;
    }
    const std::size_t close = pattern.find('@', i + 1);
    if (close == std::string::npos) {
      throw Error(ErrorCode::MalformedTemplate, "unterminated '@' in pattern: " + pattern);
    }
    const std::string name = trim(pattern.substr(i + 1, close - i - 1));
    if (name.empty()) {
      throw Error(ErrorCode::MalformedTemplate, "empty token name in pattern: " + pattern);
    }
    flush_literal();
    t.elements.push_back({true, to_upper(name)});
    i = close + 1;
  }
  flush_literal();
  return t;
}

Lexicon parse_lexicon_line(const std::string& line) {
  const std::size_t colon = line.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::MalformedTemplate, "expected TOKEN: w1, w2, ... got: " + line);
  }
  Lexicon lex;
  lex.token = to_upper(trim(line.substr(0, colon)));
  if (lex.token.empty()) {
    throw Error(ErrorCode::MalformedTemplate, "empty token name: " + line);
  }
  for (const auto& piece : split_char(line.substr(colon + 1), ',')) {
    const std::string word = trim(piece);
    if (word.empty()) continue;
    for (const auto& seen : lex.words) {
      if (seen == word) {
        throw Error(ErrorCode::DuplicateWord,
                    "word '" + word + "' repeated in lexicon " + lex.token);
      }
    }
    lex.words.push_back(word);
  }
  if (lex.words.empty()) {
    throw Error(ErrorCode::EmptyWordList, "lexicon " + lex.token + " has no words");
  }
  return lex;
}

std::vector<Template> load_template_file(std::istream& in, const std::string& name) {
  std::vector<Template> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    try {
      Template t = parse_template(line);
      t.id = name + ":" + std::to_string(lineno);
      out.push_back(std::move(t));
    } catch (const Error& e) {
      throw Error(e.code(), name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Template> load_template_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open template file " + path);
  return load_template_file(in, path);
}

LexiconMap parse_lexicons(std::istream& in, const std::string& name) {
  LexiconMap out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    Lexicon lex;
    try {
      lex = parse_lexicon_line(line);
    } catch (const Error& e) {
      throw Error(e.code(), name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!out.emplace(lex.token, lex).second) {
      throw Error(ErrorCode::DuplicateToken,
                  name + ":" + std::to_string(lineno) + ": token " + lex.token +
                      " defined twice");
    }
  }
  return out;
}

LexiconMap parse_lexicons(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open lexicon file " + path);
  return parse_lexicons(in, path);
}

std::uint64_t count_expansions(const Template& t, const LexiconMap& lexicons) {
  return resolve(t, lexicons).count;
}

std::vector<LabeledText> expand_exhaustive(const Template& t, const LexiconMap& lexicons,
                                           std::uint64_t cap) {
  const ExpansionSpace space = resolve(t, lexicons);
  if (space.count > cap) {
    throw Error(ErrorCode::ExpansionCapExceeded,
                std::to_string(space.count) + " expansions exceed cap " + std::to_string(cap));
  }
  std::vector<LabeledText> out;
  out.reserve(static_cast<std::size_t>(space.count));
  for (std::uint64_t index = 0; index < space.count; ++index) {
    out.push_back(materialize(t, space, index));
  }
  return out;
}

std::vector<LabeledText> expand_sampled(const Template& t, const LexiconMap& lexicons,
                                        std::size_t n, std::uint64_t seed) {
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  }
  const ExpansionSpace space = resolve(t, lexicons);
  rng::Engine eng(seed);
  std::vector<std::uint64_t> indices;
  if (n <= space.count) {
    indices = rng::sample_distinct(eng, space.count, n);
  } else {
    indices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) indices.push_back(rng::below(eng, space.count));
    std::sort(indices.begin(), indices.end());
  }
  std::vector<LabeledText> out;
  out.reserve(indices.size());
  for (std::uint64_t index : indices) out.push_back(materialize(t, space, index));
  return out;
}

}  // namespace semrob
