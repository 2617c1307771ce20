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

#include <hitalert/io.hpp>

#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <netdb.h>
#include <sys/socket.h>
#include <termios.h>
#include <unistd.h>

#include <hitalert/config_file.hpp>
#include <hitalert/error.hpp>

namespace hitalert
{

UniqueFd& UniqueFd::operator=(UniqueFd&& other) noexcept
{
  if (this != &other)
  {
    if (fd_ >= 0)
      ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

UniqueFd::~UniqueFd()
{
  if (fd_ >= 0)
    ::close(fd_);
}

Endpoint parse_endpoint(std::string_view uri)
{
  Endpoint endpoint;
  if (uri.empty())
    throw Error(Errc::BadConfig, "empty endpoint");
  if (uri == "-" || uri == "stdin" || uri == "stdout")
    return endpoint;
  if (uri.starts_with("tcp:"))
  {
    const auto rest = uri.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
      throw Error(Errc::BadConfig, "expected tcp:HOST:PORT, got " + std::string(uri));
    endpoint.kind = Endpoint::Kind::Tcp;
    endpoint.path = std::string(rest.substr(0, colon));
    endpoint.port = parse_int(rest.substr(colon + 1), "tcp port");
    if (endpoint.port <= 0 || endpoint.port > 65535)
      throw Error(Errc::BadConfig, "tcp port out of range");
    return endpoint;
  }
  if (uri.starts_with("serial:"))
  {
    endpoint.kind = Endpoint::Kind::Serial;
    endpoint.path = std::string(uri.substr(7));
  }
  else
  {
    endpoint.kind = Endpoint::Kind::File;
    endpoint.path = std::string(uri.starts_with("file:") ? uri.substr(5) : uri);
  }
  if (endpoint.path.empty())
    throw Error(Errc::BadConfig, "endpoint without a path: " + std::string(uri));
  return endpoint;
}

UniqueFd connect_tcp(const std::string& host, int port, const RetryPolicy& retry)
{
  auto backoff = retry.initial_backoff;
  std::string last_error = "no attempts";
  for (int attempt = 0; attempt < std::max(1, retry.max_attempts); ++attempt)
  {
    if (attempt > 0)
    {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0)
    {
      last_error = ::gai_strerror(rc);
      continue;
    }
    for (addrinfo* ai = found; ai; ai = ai->ai_next)
    {
      UniqueFd fd(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
      if (!fd)
        continue;
      if (::connect(fd.get(), ai->ai_addr, ai->ai_addrlen) == 0)
      {
        ::freeaddrinfo(found);
        return fd;
      }
      last_error = std::strerror(errno);
    }
    ::freeaddrinfo(found);
  }
  throw Error(Errc::ConnectionLost, "tcp:" + host + ":" + std::to_string(port) + ": " + last_error);
}

UniqueFd open_source(const Endpoint& endpoint, const RetryPolicy& retry)
{
  switch (endpoint.kind)
  {
    case Endpoint::Kind::Stdio:
      return UniqueFd(::dup(STDIN_FILENO));
    case Endpoint::Kind::Tcp:
      return connect_tcp(endpoint.path, endpoint.port, retry);
    case Endpoint::Kind::File:
    case Endpoint::Kind::Serial:
      break;
  }
  UniqueFd fd(::open(endpoint.path.c_str(), O_RDONLY | O_CLOEXEC | O_NOCTTY));
  if (!fd)
    throw Error(Errc::Io, endpoint.path + ": " + std::strerror(errno));
  return fd;
}

std::optional<std::string> LineReader::next_line()
{
  for (;;)
  {
    const auto newline = buffer_.find('\n', start_);
    if (newline != std::string::npos)
    {
      std::string line = buffer_.substr(start_, newline - start_);
      start_ = newline + 1;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      return line;
    }
    if (eof_)
    {
      if (start_ >= buffer_.size())
        return std::nullopt;
      std::string line = buffer_.substr(start_);
      start_ = buffer_.size();
      return line;
    }

    buffer_.erase(0, start_);
    start_ = 0;
    char chunk[4096];
    const ssize_t n = ::read(fd_, chunk, sizeof(chunk));
    if (n < 0)
    {
      if (errno == EINTR)
        continue;
      throw Error(Errc::Io, std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0)
      eof_ = true;
    else
      buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void FdSink::write(std::string_view bytes)
{
  while (!bytes.empty())
  {
    const ssize_t n = ::write(raw_, bytes.data(), bytes.size());
    if (n < 0)
    {
      if (errno == EINTR)
        continue;
      throw Error(Errc::Io, std::string("write failed: ") + std::strerror(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::unique_ptr<ByteSink> open_sink(const Endpoint& endpoint, const RetryPolicy& retry)
{
  switch (endpoint.kind)
  {
    case Endpoint::Kind::Stdio:
      return std::make_unique<FdSink>(STDOUT_FILENO);
    case Endpoint::Kind::Tcp:
      return std::make_unique<FdSink>(connect_tcp(endpoint.path, endpoint.port, retry));
    case Endpoint::Kind::File:
    {
      UniqueFd fd(::open(endpoint.path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
      if (!fd)
        throw Error(Errc::Io, endpoint.path + ": " + std::strerror(errno));
      return std::make_unique<FdSink>(std::move(fd));
    }
    case Endpoint::Kind::Serial:
    {
      UniqueFd fd(::open(endpoint.path.c_str(), O_WRONLY | O_NOCTTY | O_CLOEXEC));
      if (!fd)
        throw Error(Errc::Io, endpoint.path + ": " + std::strerror(errno));
      termios tio{};
      if (::tcgetattr(fd.get(), &tio) == 0)
      {
        ::cfmakeraw(&tio);
        ::cfsetospeed(&tio, B9600);
        ::tcsetattr(fd.get(), TCSANOW, &tio);
      }
      return std::make_unique<FdSink>(std::move(fd));
    }
  }
  throw Error(Errc::BadConfig, "unsupported sink");
}

Outbox::Outbox(ByteSink& sink, std::size_t capacity) : sink_(sink), queue_(capacity)
{
  writer_ = std::thread([this] { run(); });
}

Outbox::~Outbox()
{
  close();
}

void Outbox::post(std::string bytes)
{
  if (queue_.push_drop_oldest(std::move(bytes)))
  {
    std::lock_guard lock(stats_mutex_);
    ++dropped_;
  }
}

void Outbox::close()
{
  queue_.close();
  if (writer_.joinable())
    writer_.join();
}

void Outbox::run()
{
  std::string bytes;
  while (queue_.pop(bytes) == BoundedQueue<std::string>::Status::Item)
  {
    try
    {
      sink_.write(bytes);
      std::lock_guard lock(stats_mutex_);
      ++written_;
    }
    catch (const Error&)
    {
      std::lock_guard lock(stats_mutex_);
      ++write_errors_;
    }
  }
}

std::size_t Outbox::dropped() const
{
  std::lock_guard lock(stats_mutex_);
  return dropped_;
}

std::size_t Outbox::written() const
{
  std::lock_guard lock(stats_mutex_);
  return written_;
}

std::size_t Outbox::write_errors() const
{
  std::lock_guard lock(stats_mutex_);
  return write_errors_;
}

}  // namespace hitalert
