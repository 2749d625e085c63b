#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semrob {

enum class ErrorCode {
  // parsing / files
  MalformedTemplate,
  UnknownLabel,
  DuplicateToken,
  EmptyWordList,
  UnresolvedToken,
  ExpansionCapExceeded,
  DimensionMismatch,
  DuplicateWord,
  NonFiniteValue,
  IoError,
  // geometry
  WordNotInVocab,
  NormNotSupported,
  VocabTooSmall,
  // model
  InvalidShape,
  ShapeMismatch,
  EmptyDataset,
  LabelOutOfRange,
  CorruptFile,
  VersionMismatch,
  // assessment
  InvalidTau,
  IdMismatch,
  EmptyCorpus,
  InsufficientSamples,
  InvalidFraction,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Binary sentiment labels. Class indices are fixed: negative=0, positive=1.
inline constexpr int kLabelNegative = 0;
inline constexpr int kLabelPositive = 1;
inline constexpr int kNumClasses = 2;

// Parses "positive"/"negative" case-insensitively. Throws UnknownLabel.
int parse_label(std::string_view text);
const char* label_name(int label);

// --- small text helpers used by every file format ---

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split_char(std::string_view s, char sep);

// True for lines the text formats skip: blank or '#'-prefixed.
bool is_comment_or_blank(std::string_view line);

}  // namespace semrob
