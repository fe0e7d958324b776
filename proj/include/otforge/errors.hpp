// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace otforge {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input text could not be parsed. Carries 1-based line/column of the offending
// byte so front ends can point at it. Shape errors found after the text has
// lexed cleanly use the location-free form and put a path in the message.
struct ParseError : Error {
  std::size_t line = 0;
  std::size_t column = 0;
  ParseError(const std::string& msg, std::size_t l, std::size_t c)
      : Error(msg + " (line " + std::to_string(l) + ", column " +
              std::to_string(c) + ")"),
        line(l),
        column(c) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A supplied certificate or factorization failed verification.
struct CertificateError : Error {
  using Error::Error;
};

// A bounded search ran out of candidates; retrying with a larger bound may
// succeed.
struct SearchExhausted : Error {
  using Error::Error;
};

// An irreducibility witness could not be produced; callers must treat the
// input as unclassified, never as reducible.
struct UnknownIrreducibility : Error {
  using Error::Error;
};

}  // namespace otforge
