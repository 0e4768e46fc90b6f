// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_ERRORS_HPP_
#define CURIOMOL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curiomol {

//! Raised when a caller breaks an operation's precondition
//! (shape mismatch, stepping a finished episode, mismatched widths).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

//! Raised when a loss, gradient or reward turns non-finite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Unparseable token text; `position` is the byte offset of the bad token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace curiomol

#endif  // CURIOMOL_ERRORS_HPP_
