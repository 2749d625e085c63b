#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "semrob/common.hpp"

// Template DSL for generating labeled sentiment texts. A template is a
// sentence pattern whose `@TOKEN@` placeholders are substituted from named
// word lists (lexicons); the label is fixed per template, so every expansion
// is label-consistent by construction.
//
// File formats:
//   templates: TSV, one per line:  pattern<TAB>label<TAB>phenomenon
//   lexicons:  one per line:       TOKEN: w1, w2, ...
// Both formats are UTF-8; blank lines and '#'-prefixed lines are ignored.

namespace semrob {

inline constexpr std::uint64_t kDefaultExpansionCap = 1000000;

struct Lexicon {
  std::string token;               // uppercase-normalized name
  std::vector<std::string> words;  // non-empty, distinct, order preserved
};

// Keyed by uppercase token name. std::map keeps iteration deterministic.
using LexiconMap = std::map<std::string, Lexicon>;

struct TemplateElement {
  bool is_placeholder = false;
  std::string text;  // literal word, or uppercase token name
};

struct Template {
  std::vector<TemplateElement> elements;
  int label = kLabelNegative;
  std::string phenomenon;
  std::string id;  // assigned by load_template_file ("<file>:<line>"), else empty

  std::size_t placeholder_count() const;
  // Token names in order of occurrence (repeats kept).
  std::vector<std::string> placeholder_tokens() const;
};

struct LabeledText {
  std::vector<std::string> words;
  int label = kLabelNegative;
  std::string source;  // template id + substitution assignment, or corpus provenance
};

// Parses one `pattern<TAB>label<TAB>phenomenon` line.
// Placeholders are `@NAME@` spans inside the pattern; names are matched
// case-insensitively and normalized to uppercase. Literal text between
// placeholders is tokenized on whitespace.
// Throws MalformedTemplate (wrong field count, unterminated or empty `@...@`,
// empty pattern) and UnknownLabel.
Template parse_template(const std::string& line);

// Parses one `TOKEN: w1, w2, ...` line.
// Throws MalformedTemplate (missing ':', empty token), EmptyWordList,
// DuplicateWord (repeated word inside one lexicon).
Lexicon parse_lexicon_line(const std::string& line);

// Whole-file loaders. Line numbers are reported in error messages; the
// template loader tags each template with "<name>:<line>" as its id.
// parse_lexicons throws DuplicateToken when two lines define the same token.
std::vector<Template> load_template_file(std::istream& in, const std::string& name);
std::vector<Template> load_template_file(const std::string& path);
LexiconMap parse_lexicons(std::istream& in, const std::string& name);
LexiconMap parse_lexicons(const std::string& path);

// Number of distinct expansions: the product over placeholder occurrences of
// the lexicon size (repeated tokens substitute independently).
// Throws UnresolvedToken; ExpansionCapExceeded if the product overflows.
std::uint64_t count_expansions(const Template& t, const LexiconMap& lexicons);

// All expansions, in lexicographic order of the per-occurrence lexicon
// indices (first placeholder most significant). Every output carries
// t.label and contains no '@'.
std::vector<LabeledText> expand_exhaustive(const Template& t, const LexiconMap& lexicons,
                                           std::uint64_t cap = kDefaultExpansionCap);

// n expansions sampled uniformly without replacement (with replacement when
// n exceeds the exhaustive count), emitted in exhaustive order. Reproducible
// for a fixed seed.
std::vector<LabeledText> expand_sampled(const Template& t, const LexiconMap& lexicons,
                                        std::size_t n, std::uint64_t seed);

}  // namespace semrob
