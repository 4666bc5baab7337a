// Copyright 2026 The pairvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PAIRVOTE_ERROR_HPP_
#define PAIRVOTE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pairvote {

/// Base of every exception thrown by the library. `module()` names the
/// component that raised it so the CLI can report "module: cause".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class DatasetError : public Error {
 public:
  explicit DatasetError(const std::string& what) : Error("dataset", what) {}
};

/// Syntax error in an input file; `line()` is 1-based, 0 when unknown.
class ParseError : public DatasetError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DatasetError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ClassifierError : public Error {
 public:
  explicit ClassifierError(const std::string& what) : Error("classifiers", what) {}
};

class GaError : public Error {
 public:
  explicit GaError(const std::string& what) : Error("ga_select", what) {}
};

class VoteError : public Error {
 public:
  explicit VoteError(const std::string& what) : Error("pairvote", what) {}
};

class ExperimentError : public Error {
 public:
  explicit ExperimentError(const std::string& what) : Error("experiment", what) {}
};

}  // namespace pairvote

#endif  // PAIRVOTE_ERROR_HPP_
