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

#include "washh/extproc.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/core.h>
#include <json.hpp>

extern char** environ;

namespace washh::extproc {

using nlohmann::json;

namespace {

Vector number_array(const json& j, const char* what, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) {
    throw HandshakeFailed(fmt::format("\"{}\" must be an array of {} numbers", what, dim));
  }
  Vector out;
  out.reserve(dim);
  for (const auto& v : j) {
    if (!v.is_number()) throw HandshakeFailed(fmt::format("\"{}\" contains a non-number", what));
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Handshake parse_handshake(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw HandshakeFailed(fmt::format("handshake is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw HandshakeFailed("handshake must be a JSON object");
  if (!j.contains("dim")) throw HandshakeFailed("handshake is missing \"dim\"");
  const json& dim = j["dim"];
  if (!dim.is_number_integer() || dim.get<std::int64_t>() <= 0) {
    throw HandshakeFailed("\"dim\" must be a positive integer");
  }
  Handshake h;
  h.dim = dim.get<std::size_t>();
  if (!j.contains("lower") || !j.contains("upper")) {
    throw HandshakeFailed("handshake is missing \"lower\" or \"upper\"");
  }
  h.lower = number_array(j["lower"], "lower", h.dim);
  h.upper = number_array(j["upper"], "upper", h.dim);
  for (std::size_t i = 0; i < h.dim; ++i) {
    if (!std::isfinite(h.lower[i]) || !std::isfinite(h.upper[i]) || !(h.lower[i] < h.upper[i])) {
      throw HandshakeFailed(fmt::format("invalid bounds at coordinate {}", i));
    }
  }
  if (j.contains("anchors")) {
    const json& anchors = j["anchors"];
    if (!anchors.is_array()) throw HandshakeFailed("\"anchors\" must be an array");
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      Vector a = number_array(anchors[k], "anchors", h.dim);
      bool clipped = false;
      for (std::size_t i = 0; i < h.dim; ++i) {
        const double c = std::clamp(a[i], h.lower[i], h.upper[i]);
        if (c != a[i]) {
          clipped = true;
          a[i] = c;
        }
      }
      if (clipped) h.warnings.push_back(fmt::format("anchor {} lies outside the box; clipped", k));
      h.anchors.push_back(std::move(a));
    }
  }
  return h;
}

std::string encode_request(std::uint64_t id, std::span<const double> x) {
  json req = json::object();
  req["id"] = id;
  req["x"] = json::array();
  for (double v : x) req["x"].push_back(v);
  return req.dump();
}

double decode_response(std::string_view line, std::uint64_t expected_id) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(fmt::format("response is not valid JSON: {}", e.what()));
  }
  if (!j.is_object() || !j.contains("id") || !j.contains("loss")) {
    throw ProtocolError("response must be an object with \"id\" and \"loss\"");
  }
  const json& id = j["id"];
  if (!id.is_number_integer() || id.get<std::int64_t>() < 0) {
    throw ProtocolError("response id must be a non-negative integer");
  }
  if (id.get<std::uint64_t>() != expected_id) {
    throw ProtocolError(
        fmt::format("response id {} does not match request id {}", id.get<std::uint64_t>(), expected_id));
  }
  const json& loss = j["loss"];
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (loss.is_null()) return inf;
  if (loss.is_number()) {
    const double v = loss.get<double>();
    return std::isfinite(v) ? v : inf;
  }
  if (loss.is_string()) {
    const std::string s = loss.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw ProtocolError(fmt::format("loss string '{}' is not a number", s));
    }
    return std::isfinite(v) ? v : inf;
  }
  throw ProtocolError("loss must be a number, a numeric string, or null");
}

// ---------------------------------------------------------------------------
// Subprocess

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

Subprocess::Subprocess(const std::string& command) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw ExtprocError(fmt::format("pipe failed: {}", std::strerror(errno)));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    const int err = errno;
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ExtprocError(fmt::format("pipe failed: {}", std::strerror(err)));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::string sh = "/bin/sh";
  std::string flag = "-c";
  std::string cmd = command;
  char* argv[] = {sh.data(), flag.data(), cmd.data(), nullptr};
  // Own process group, so teardown also reaches whatever the shell started.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  const int rc = ::posix_spawn(&pid_, "/bin/sh", &actions, &attr, argv, environ);
  posix_spawnattr_destroy(&attr);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw ExtprocError(fmt::format("cannot start '{}': {}", command, std::strerror(rc)));
  }
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

Subprocess::~Subprocess() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ <= 0) return;
  int status = 0;
  bool reaped = false;
  for (int i = 0; i < 50 && !reaped; ++i) {
    reaped = ::waitpid(pid_, &status, WNOHANG) == pid_;
    if (!reaped) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ::kill(-pid_, SIGKILL);
  if (!reaped) ::waitpid(pid_, &status, 0);
}

void Subprocess::write_line(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EvaluatorDied(fmt::format("evaluator input closed: {}", std::strerror(errno)));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> Subprocess::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw EvaluatorDied(fmt::format("poll failed: {}", std::strerror(errno)));
    }
    if (rc == 0) return std::nullopt;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EvaluatorDied(fmt::format("read failed: {}", std::strerror(errno)));
    }
    if (n == 0) throw EvaluatorDied("evaluator closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

// ---------------------------------------------------------------------------
// EvaluatorHandle

EvaluatorHandle::EvaluatorHandle(const std::string& command, EvaluatorOptions options)
    : process_(command), options_(options) {}

std::shared_ptr<EvaluatorHandle> EvaluatorHandle::launch(const std::string& command,
                                                         EvaluatorOptions options) {
  return std::shared_ptr<EvaluatorHandle>(new EvaluatorHandle(command, options));
}

Problem EvaluatorHandle::handshake() {
  if (connected_) throw HandshakeFailed("handshake already performed");
  std::optional<std::string> line;
  try {
    line = process_.read_line(options_.handshake_timeout);
  } catch (const EvaluatorDied& e) {
    throw HandshakeFailed(fmt::format("evaluator exited before the handshake: {}", e.what()));
  }
  if (!line) throw HandshakeFailed("timed out waiting for the handshake");
  info_ = parse_handshake(*line);
  for (const auto& w : info_.warnings) std::cerr << "warning: " << w << '\n';
  connected_ = true;

  Problem p;
  p.name = "external";
  p.dim = info_.dim;
  p.lower = info_.lower;
  p.upper = info_.upper;
  p.anchors = info_.anchors;
  std::shared_ptr<EvaluatorHandle> self = shared_from_this();
  p.objective = [self](std::span<const double> x) { return self->eval_remote(x); };
  validate(p);
  return p;
}

double EvaluatorHandle::eval_remote(std::span<const double> x) {
  if (!connected_) throw ProtocolError("eval_remote called before the handshake");
  if (x.size() != info_.dim) {
    throw ProtocolError(fmt::format("candidate has {} coordinates, expected {}", x.size(), info_.dim));
  }
  const std::uint64_t id = next_id_++;
  process_.write_line(encode_request(id, x));
  const auto line = process_.read_line(options_.eval_timeout);
  if (!line) {
    throw EvaluatorTimeout(fmt::format("no response to request {} within {} ms", id,
                                       options_.eval_timeout.count()));
  }
  return decode_response(*line, id);
}

Problem connect(const std::string& command, EvaluatorOptions options) {
  return EvaluatorHandle::launch(command, options)->handshake();
}

}  // namespace washh::extproc
