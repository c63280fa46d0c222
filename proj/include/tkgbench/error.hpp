/** Copyright 2026 The tkgbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TKGBENCH_ERROR_HPP
#define TKGBENCH_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tkgbench {

/// Broad error families. The CLI maps each family to its own exit code.
enum class ErrorKind {
  config,     // bad flags, bad config files, empty grids
  data,       // malformed input rows, schema mismatches, degenerate splits
  protocol,   // evaluation contract violations (missing negatives, causality)
  integrity,  // checksum mismatch, corrupted or foreign binary files
  network,    // retryable transport failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// A row of a delimited input could not be decoded.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SplitError : public DataError {
 public:
  explicit SplitError(const std::string& what)
      : DataError("split: " + what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorKind::protocol, what) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what)
      : Error(ErrorKind::integrity, what) {}
};

/// Wrong magic number or unsupported version.
class FormatError : public IntegrityError {
 public:
  explicit FormatError(const std::string& what)
      : IntegrityError("format: " + what) {}
};

/// Truncated file or checksum mismatch.
class CorruptionError : public IntegrityError {
 public:
  explicit CorruptionError(const std::string& what)
      : IntegrityError("corrupt: " + what) {}
};

class NetworkError : public Error {
 public:
  explicit NetworkError(const std::string& what)
      : Error(ErrorKind::network, what) {}

  bool retryable() const noexcept { return true; }
};

}  // namespace tkgbench

#endif  // TKGBENCH_ERROR_HPP
