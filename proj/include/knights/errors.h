#pragma once

#include <stdexcept>
#include <string>

namespace knights {

// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid n, l, spy count or other out-of-domain argument.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Self-question or verbatim repeat.
class InvalidMoveError : public Error {
 public:
  using Error::Error;
};

// A move made out of turn (e.g. an answer while a question is expected).
class SequenceError : public Error {
 public:
  using Error::Error;
};

// Unknown game id.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A transcript that no assignment with at most l spies explains.
class CorruptedGameError : public Error {
 public:
  using Error::Error;
};

// Work refused because it would exceed a size or time budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Operation not supported for the requested mode (e.g. behaviour).
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace knights
