#include "semrob/common.hpp"

#include <algorithm>

namespace semrob {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTemplate: return "MalformedTemplate";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicateToken: return "DuplicateToken";
    case ErrorCode::EmptyWordList: return "EmptyWordList";
    case ErrorCode::UnresolvedToken: return "UnresolvedToken";
    case ErrorCode::ExpansionCapExceeded: return "ExpansionCapExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateWord: return "DuplicateWord";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::WordNotInVocab: return "WordNotInVocab";
    case ErrorCode::NormNotSupported: return "NormNotSupported";
    case ErrorCode::VocabTooSmall: return "VocabTooSmall";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::InvalidTau: return "InvalidTau";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

int parse_label(std::string_view text) {
  std::string s = to_lower(trim(text));
  if (s == "positive") return kLabelPositive;
  if (s == "negative") return kLabelNegative;
  throw Error(ErrorCode::UnknownLabel, "label must be positive or negative, got '" + s + "'");
}

const char* label_name(int label) {
  return label == kLabelPositive ? "positive" : "negative";
}

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> split_char(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool is_comment_or_blank(std::string_view line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

}  // namespace semrob
