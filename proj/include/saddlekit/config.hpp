#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/problem.hpp"

namespace saddlekit {

/// Flat key-value experiment/problem format with [section] headers.
/// `format_version = 1` is required at top level; unknown keys are rejected
/// by the consumers below with line-anchored messages.
struct KvFile {
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };
  // section "" holds keys before the first header
  std::map<std::string, std::map<std::string, Entry>> sections;

  static KvFile parse(const std::string& text);
  static KvFile parse_file(const std::string& path);

  bool has_section(const std::string& s) const;
  const Entry* find(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::optional<std::string> get_optional(const std::string& section,
                                          const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key) const;
  Vector get_vector(const std::string& section, const std::string& key,
                    Index n) const;
  Matrix get_matrix(const std::string& section, const std::string& key,
                    Index rows, Index cols) const;

  /// Throws ConfigError naming the first key never consumed by a getter.
  void reject_unconsumed() const;
  void require_format_version() const;
};

/// Loads a problem definition (sections [g], [fstar], [k], top-level dims).
SaddleProblem load_problem(const KvFile& kv);
std::string problem_to_string(const SaddleProblem& p);

}  // namespace saddlekit
