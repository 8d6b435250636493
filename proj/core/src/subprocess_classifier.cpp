#include "specmcd/subprocess_classifier.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace specmcd {

namespace {

void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - Clock::now())
                        .count();
  if (left <= 0) return 0;
  return static_cast<int>(std::min<long long>(left, 3'600'000));
}

[[noreturn]] void throw_backend(const std::string& cmd, const std::string& why) {
  throw BackendError("subprocess classifier '" + cmd + "': " + why);
}

}  // namespace

std::vector<std::uint8_t> encode_request_frame(const Block& block) {
  std::vector<std::uint8_t> out;
  const std::size_t pixels =
      static_cast<std::size_t>(block.width) * block.height;
  out.reserve(16 + 4 * pixels * block.bands.size());
  out.insert(out.end(), kRequestMagic, kRequestMagic + 4);
  append_u32le(out, static_cast<std::uint32_t>(block.width));
  append_u32le(out, static_cast<std::uint32_t>(block.height));
  append_u32le(out, static_cast<std::uint32_t>(block.bands.size()));
  for (const BlockBand& band : block.bands) {
    for (float v : band.values) {
      std::uint32_t u;
      std::memcpy(&u, &v, 4);
      append_u32le(out, u);
    }
  }
  return out;
}

struct SubprocessClassifier::Worker {
  pid_t pid = -1;
  int to_child = -1;    // we write requests here
  int from_child = -1;  // we read responses here
  std::mutex lock;
  bool broken = false;

  ~Worker() {
    if (to_child >= 0) ::close(to_child);
    if (from_child >= 0) ::close(from_child);
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      int status = 0;
      ::waitpid(pid, &status, 0);
    }
  }
};

SubprocessClassifier::SubprocessClassifier(std::string command_line,
                                           SubprocessOptions options)
    : command_line_(std::move(command_line)), options_(options) {
  if (options_.workers < 1) {
    throw ConfigError("subprocess classifier needs at least one worker");
  }
  if (!(options_.timeout_seconds > 0.0)) {
    throw ConfigError("subprocess classifier timeout must be positive");
  }
  // A dead worker must surface as a read error, not a fatal SIGPIPE.
  ::signal(SIGPIPE, SIG_IGN);

  for (int w = 0; w < options_.workers; ++w) {
    int request_pipe[2];
    int response_pipe[2];
    if (::pipe(request_pipe) != 0 || ::pipe(response_pipe) != 0) {
      throw_backend(command_line_, "pipe() failed");
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
      throw_backend(command_line_, "fork() failed");
    }
    if (pid == 0) {
      ::dup2(request_pipe[0], STDIN_FILENO);
      ::dup2(response_pipe[1], STDOUT_FILENO);
      ::close(request_pipe[0]);
      ::close(request_pipe[1]);
      ::close(response_pipe[0]);
      ::close(response_pipe[1]);
      ::execl("/bin/sh", "sh", "-c", command_line_.c_str(),
              static_cast<char*>(nullptr));
      _exit(127);
    }
    ::close(request_pipe[0]);
    ::close(response_pipe[1]);
    // Non-blocking ends so frame writes and reads honor the deadline even
    // when a worker stalls with full or empty pipes.
    ::fcntl(request_pipe[1], F_SETFL, O_NONBLOCK);
    ::fcntl(response_pipe[0], F_SETFL, O_NONBLOCK);

    auto worker = std::make_unique<Worker>();
    worker->pid = pid;
    worker->to_child = request_pipe[1];
    worker->from_child = response_pipe[0];
    workers_.push_back(std::move(worker));
  }
}

SubprocessClassifier::~SubprocessClassifier() = default;

CloudScore SubprocessClassifier::classify(const Block& block) const {
  const std::size_t index =
      next_worker_.fetch_add(1, std::memory_order_relaxed) % workers_.size();
  Worker& worker = *workers_[index];
  std::lock_guard<std::mutex> guard(worker.lock);

  if (worker.broken) {
    throw_backend(command_line_, "worker previously failed");
  }
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(options_.timeout_seconds));

  auto fail = [&](const std::string& why) -> void {
    worker.broken = true;
    int status = 0;
    if (::waitpid(worker.pid, &status, WNOHANG) == worker.pid &&
        WIFEXITED(status)) {
      throw_backend(command_line_, why + " (worker exited with status " +
                                       std::to_string(WEXITSTATUS(status)) + ")");
    }
    throw_backend(command_line_, why);
  };

  const std::vector<std::uint8_t> frame = encode_request_frame(block);
  std::size_t written = 0;
  while (written < frame.size()) {
    struct pollfd pfd = {worker.to_child, POLLOUT, 0};
    const int pr = ::poll(&pfd, 1, remaining_ms(deadline));
    if (pr == 0) fail("timed out writing request frame");
    if (pr < 0) fail("poll() failed while writing");
    const ssize_t n =
        ::write(worker.to_child, frame.data() + written, frame.size() - written);
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      fail(std::string("write failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }

  std::uint8_t response[8];
  std::size_t got = 0;
  while (got < sizeof(response)) {
    struct pollfd pfd = {worker.from_child, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, remaining_ms(deadline));
    if (pr == 0) fail("timed out waiting for response");
    if (pr < 0) fail("poll() failed while reading");
    const ssize_t n =
        ::read(worker.from_child, response + got, sizeof(response) - got);
    if (n == 0) fail("worker closed its pipe mid-frame");
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      fail(std::string("read failed: ") + std::strerror(errno));
    }
    got += static_cast<std::size_t>(n);
  }

  if (std::memcmp(response, kResponseMagic, 4) != 0) {
    fail("bad response magic");
  }
  std::uint32_t u = static_cast<std::uint32_t>(response[4]) |
                    (static_cast<std::uint32_t>(response[5]) << 8) |
                    (static_cast<std::uint32_t>(response[6]) << 16) |
                    (static_cast<std::uint32_t>(response[7]) << 24);
  float value;
  std::memcpy(&value, &u, 4);
  return validated_score(CloudScore{value}, describe());
}

std::string SubprocessClassifier::describe() const {
  std::ostringstream out;
  out << "subprocess:" << command_line_ << " (workers=" << options_.workers
      << ")";
  return out.str();
}

}  // namespace specmcd
