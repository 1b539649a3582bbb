// Copyright 2026 The washh Authors
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

// External evaluator protocol.
//
// The evaluator is any program started through /bin/sh -c.  It talks
// newline-delimited JSON (UTF-8, one object per line) over its standard
// streams; its standard error is passed through untouched for logs.
//
//   child -> parent, once:  {"dim":D,"lower":[...],"upper":[...],"anchors":[[...],...]}
//   parent -> child:        {"id":k,"x":[...]}
//   child -> parent:        {"id":k,"loss":v}
//
// Request ids start at 0 and increase by one.  Exactly one request is in
// flight at a time.  A loss of null, or a string such as "NaN" or "inf",
// is recorded as +inf.

#ifndef WASHH_EXTPROC_HPP
#define WASHH_EXTPROC_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "washh/core.hpp"

namespace washh::extproc {

class ExtprocError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class HandshakeFailed : public ExtprocError {
 public:
  using ExtprocError::ExtprocError;
};
class ProtocolError : public ExtprocError {
 public:
  using ExtprocError::ExtprocError;
};
class EvaluatorDied : public ExtprocError {
 public:
  using ExtprocError::ExtprocError;
};
class EvaluatorTimeout : public ExtprocError {
 public:
  using ExtprocError::ExtprocError;
};

struct Handshake {
  std::size_t dim = 0;
  Vector lower;
  Vector upper;
  std::vector<Vector> anchors;
  /// One entry per anchor that had to be clipped into the box.
  std::vector<std::string> warnings;
};

/// Parses and validates the handshake line.  Out-of-box anchors are clipped
/// and reported in `warnings`.  Throws HandshakeFailed.
Handshake parse_handshake(std::string_view line);

std::string encode_request(std::uint64_t id, std::span<const double> x);

/// Returns the loss, or +inf for a non-finite one.  Throws ProtocolError on
/// malformed lines and id mismatches.
double decode_response(std::string_view line, std::uint64_t expected_id);

/// A child process with pipes on its standard input and output.
class Subprocess {
 public:
  /// Starts `/bin/sh -c command`.  Throws ExtprocError if spawning fails.
  explicit Subprocess(const std::string& command);
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  /// Closes the child's input, gives it a moment to exit, then kills its
  /// process group.
  ~Subprocess();

  /// Throws EvaluatorDied when the child's input is closed.
  void write_line(std::string_view line);
  /// Returns std::nullopt on timeout; throws EvaluatorDied at end of stream.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

struct EvaluatorOptions {
  std::chrono::milliseconds handshake_timeout{30000};
  std::chrono::milliseconds eval_timeout{30000};
};

/// One evaluator child plus its request counter.  Not thread-safe; each
/// concurrent run needs its own handle.
class EvaluatorHandle : public std::enable_shared_from_this<EvaluatorHandle> {
 public:
  static std::shared_ptr<EvaluatorHandle> launch(const std::string& command,
                                                 EvaluatorOptions options = {});

  /// Reads the handshake and returns a Problem whose objective is
  /// eval_remote.  The Problem keeps the handle alive.
  Problem handshake();

  /// Sends x, waits for the matching response.  Throws ProtocolError,
  /// EvaluatorDied, or EvaluatorTimeout.
  double eval_remote(std::span<const double> x);

  std::uint64_t requests() const { return next_id_; }
  std::size_t dim() const { return info_.dim; }

 private:
  EvaluatorHandle(const std::string& command, EvaluatorOptions options);

  Subprocess process_;
  EvaluatorOptions options_;
  Handshake info_;
  bool connected_ = false;
  std::uint64_t next_id_ = 0;
};

/// launch() followed by handshake().
Problem connect(const std::string& command, EvaluatorOptions options = {});

}  // namespace washh::extproc

#endif  // WASHH_EXTPROC_HPP
