// Copyright 2026 The nodal-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NODAL_ERROR_HPP
#define NODAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nodal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (graph, lengths, JSON, arguments).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An operation was asked for a quantity that needs a simple eigenvalue
/// with an eigenvector that does not vanish on vertices.
class NonGenericError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics did not reach the requested accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace nodal

#endif  // NODAL_ERROR_HPP
