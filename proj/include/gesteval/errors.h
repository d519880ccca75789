// Copyright 2026 The gesteval Authors.
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

#ifndef GESTEVAL_ERRORS_H_
#define GESTEVAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gesteval {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong arity, shape, or dimensionality of an input.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Geometry that has no defined angle (coincident points, zero-length links).
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// Numerical input for which the requested quantity is undefined.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Too few samples for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Glove pixel counts that carry no orientation information.
class UnknownOrientationError : public Error {
 public:
  using Error::Error;
};

// A keypoint required by a mapping step is absent or below the confidence
// threshold. Stream mapping turns this into hold-last-value.
class MissingKeypointError : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `line()` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace gesteval

#endif  // GESTEVAL_ERRORS_H_
