#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spraylab {

/// Evaluation failed at a concrete point (domain violation, singular metric...).
/// `offset` is the 1-based byte offset of the offending sub-expression in the
/// source text when the expression was parsed, 0 for synthetic expressions.
class EvalError : public std::runtime_error {
  public:
    explicit EvalError(const std::string& what, std::size_t offset = 0)
        : std::runtime_error(offset ? what + " (at offset " + std::to_string(offset) + ")" : what),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_ = 0;
};

/// Malformed input text. `offset` is 1-based; `expected` lists the tokens the
/// parser would have accepted there.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t offset, std::string expected = {})
        : std::runtime_error(what + " at offset " + std::to_string(offset) +
                             (expected.empty() ? "" : "; expected " + expected)),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

  private:
    std::size_t offset_;
    std::string expected_;
};

/// Bad run configuration (out-of-range order, unknown catalog name...).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation's stated precondition failed (non-semi-basic trace argument,
/// inhomogeneous projective factor, Bianchi check in dimension 2...).
class PreconditionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spraylab
