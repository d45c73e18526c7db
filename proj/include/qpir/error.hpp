// Copyright 2026 The qpir-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qpir {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operands live in different fields or have incompatible shapes.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// A constructed or loaded object failed its certificate.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// A randomized search ran out of attempts.
class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, long attempts)
      : Error(what), attempts_(attempts) {}
  long attempts() const noexcept { return attempts_; }

 private:
  long attempts_;
};

/// A computation would exceed a configured size guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Phase-space and dense simulations produced different outcomes.
class BackendDisagreement : public Error {
 public:
  using Error::Error;
};

/// Should never happen; signals a bug in the library itself.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpir
