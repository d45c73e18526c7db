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

// In-process message passing between the user and the servers.
//
// Only user <-> server channels exist. Servers have no handle on each other,
// so non-communication is structural rather than a convention.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <vector>

#include "qpir/error.hpp"
#include "qpir/stabilizer.hpp"

namespace qpir {

/// Reliable FIFO channel with a blocking receive.
template <typename T>
class Channel {
 public:
  void send(T msg) {
    {
      std::lock_guard lk(mu_);
      if (closed_) throw PreconditionError("send on a closed channel");
      q_.push_back(std::move(msg));
    }
    cv_.notify_one();
  }

  /// Blocks until a message arrives; throws once the channel is closed and drained.
  T receive() {
    std::unique_lock lk(mu_);
    cv_.wait(lk, [&] { return !q_.empty() || closed_; });
    if (q_.empty()) throw PreconditionError("receive on a closed channel");
    T msg = std::move(q_.front());
    q_.pop_front();
    return msg;
  }

  void close() {
    {
      std::lock_guard lk(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> q_;
  bool closed_ = false;
};

/// Query rows (q_sX, q_sZ) for one server, stamped with the sender's Lamport time.
struct QueryMessage {
  int server = 0;
  std::vector<FieldElem> qx, qz;
  std::uint64_t tick = 0;
};

/// A server returns its qudit after acting on it with X(a)Z(b). The label
/// travels with the message so the transcript can record it.
struct AnswerMessage {
  int server = 0;
  WeylLabel action;
  std::uint64_t tick = 0;
};

/// Per-pair channels. Actors keep their own Lamport clocks in the messages.
class Network {
 public:
  explicit Network(int servers) : down_(servers), up_(servers) {
    for (int s = 0; s < servers; ++s) {
      down_[s] = std::make_unique<Channel<QueryMessage>>();
      up_[s] = std::make_unique<Channel<AnswerMessage>>();
    }
  }

  int servers() const noexcept { return static_cast<int>(down_.size()); }
  Channel<QueryMessage>& to_server(int s) { return *down_.at(s); }
  Channel<AnswerMessage>& to_user(int s) { return *up_.at(s); }

  std::uint64_t messages() const { return messages_.load(); }
  void count_message() { ++messages_; }

  void close_all() {
    for (auto& c : down_) c->close();
    for (auto& c : up_) c->close();
  }

 private:
  std::vector<std::unique_ptr<Channel<QueryMessage>>> down_;
  std::vector<std::unique_ptr<Channel<AnswerMessage>>> up_;
  std::atomic<std::uint64_t> messages_{0};
};

}  // namespace qpir
