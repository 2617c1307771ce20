/*
 * Copyright 2026 The hitalert Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Byte-stream endpoints for the live feed and the pager sink, addressed by
// URI-like strings: `-`, `file:PATH` (or a bare path), `tcp:HOST:PORT`,
// `serial:/dev/...`.

#ifndef HITALERT_IO_HPP
#define HITALERT_IO_HPP

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>

namespace hitalert
{

/// Owning POSIX file descriptor.
class UniqueFd
{
public:
  UniqueFd() = default;
  explicit UniqueFd(int fd) : fd_(fd) {}
  UniqueFd(UniqueFd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  UniqueFd& operator=(UniqueFd&& other) noexcept;
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd();

  int get() const noexcept { return fd_; }
  explicit operator bool() const noexcept { return fd_ >= 0; }

private:
  int fd_ = -1;
};

struct Endpoint
{
  enum class Kind
  {
    Stdio,
    File,
    Tcp,
    Serial,
  };
  Kind kind = Kind::Stdio;
  std::string path;  // file/serial path or tcp host
  int port = 0;
};

/// Throws BadConfig on an unparseable URI.
Endpoint parse_endpoint(std::string_view uri);

struct RetryPolicy
{
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{100};
};

/// Connects with exponential backoff; throws ConnectionLost when attempts run out.
UniqueFd connect_tcp(const std::string& host, int port, const RetryPolicy& retry);

/// Opens a readable endpoint. Throws Io or ConnectionLost.
UniqueFd open_source(const Endpoint& endpoint, const RetryPolicy& retry = {});

/// Buffered newline splitter over a file descriptor.
class LineReader
{
public:
  explicit LineReader(int fd) : fd_(fd) {}

  /// Next line without its terminator; nullopt at end of stream. Throws Io on read errors.
  std::optional<std::string> next_line();

private:
  int fd_;
  std::string buffer_;
  std::size_t start_ = 0;
  bool eof_ = false;
};

class ByteSink
{
public:
  virtual ~ByteSink() = default;
  virtual void write(std::string_view bytes) = 0;
};

/// Writes everything to a descriptor, retrying short writes. Throws Io.
class FdSink : public ByteSink
{
public:
  explicit FdSink(UniqueFd fd) : fd_(std::move(fd)), raw_(fd_.get()) {}
  explicit FdSink(int borrowed_fd) : raw_(borrowed_fd) {}
  void write(std::string_view bytes) override;

private:
  UniqueFd fd_;
  int raw_;
};

/// Throws Io or ConnectionLost.
std::unique_ptr<ByteSink> open_sink(const Endpoint& endpoint, const RetryPolicy& retry = {});

/// Multi-producer queue with a capacity limit.
template <class T>
class BoundedQueue
{
public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity ? capacity : 1) {}

  /// Blocks while full. Returns false once closed.
  bool push(T item)
  {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_)
      return false;
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  /// Never blocks; discards the oldest item when full and returns true if it did.
  bool push_drop_oldest(T item)
  {
    std::lock_guard lock(mutex_);
    bool dropped = false;
    if (items_.size() >= capacity_)
    {
      items_.pop_front();
      dropped = true;
    }
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return dropped;
  }

  enum class Status
  {
    Item,
    Timeout,
    Closed,
  };

  /// Waits for an item until `deadline` (if given). Closed is returned only once drained.
  Status pop(T& out, std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt)
  {
    std::unique_lock lock(mutex_);
    const auto ready = [&] { return closed_ || !items_.empty(); };
    if (deadline)
    {
      if (!not_empty_.wait_until(lock, *deadline, ready))
        return Status::Timeout;
    }
    else
      not_empty_.wait(lock, ready);
    if (items_.empty())
      return Status::Closed;
    out = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return Status::Item;
  }

  void close()
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

/// Drains encoded commands to a sink on its own thread so producers never wait on I/O.
class Outbox
{
public:
  Outbox(ByteSink& sink, std::size_t capacity = 256);
  ~Outbox();
  Outbox(const Outbox&) = delete;
  Outbox& operator=(const Outbox&) = delete;

  void post(std::string bytes);

  /// Flushes what is queued and stops the writer thread.
  void close();

  std::size_t dropped() const;
  std::size_t written() const;
  std::size_t write_errors() const;

private:
  void run();

  ByteSink& sink_;
  BoundedQueue<std::string> queue_;
  mutable std::mutex stats_mutex_;
  std::size_t dropped_ = 0;
  std::size_t written_ = 0;
  std::size_t write_errors_ = 0;
  std::thread writer_;
};

}  // namespace hitalert

#endif  // HITALERT_IO_HPP
