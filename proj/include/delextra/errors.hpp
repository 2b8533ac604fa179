#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace delextra {

// Malformed input text (CoNLL line, model file, config file).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A sentence whose heads do not form a tree rooted at 0.
// sentence() is 1-based; 0 means "not attributable to a sentence".
class StructureError : public std::runtime_error {
 public:
  StructureError(std::size_t sentence, const std::string& what)
      : std::runtime_error(sentence == 0
                               ? what
                               : "sentence " + std::to_string(sentence) +
                                     ": " + what),
        sentence_(sentence) {}

  std::size_t sentence() const noexcept { return sentence_; }

 private:
  std::size_t sentence_;
};

// Bad command-line or configuration value.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace delextra
