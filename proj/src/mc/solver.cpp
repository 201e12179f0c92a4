#include "hrmv/mc/solver.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "hrmv/value.hpp"

extern char** environ;

namespace hrmv::mc {

SolverConfig resolve_solver(const std::string& explicit_path)
{
  SolverConfig cfg;
  cfg.path = explicit_path;
  if (cfg.path.empty())
    if (const char* env = std::getenv("HRMV_SOLVER"); env && *env) cfg.path = env;
  if (cfg.path.empty()) cfg.path = "z3";
  const std::string base = std::filesystem::path(cfg.path).filename().string();
  if (base.find("z3") != std::string::npos) {
    cfg.args = {"-in", "-smt2"};
  } else if (base.find("cvc5") != std::string::npos || base.find("cvc4") != std::string::npos) {
    cfg.args = {"--lang=smt2", "--incremental"};
  }
  return cfg;
}

namespace {

class Child {
public:
  explicit Child(const SolverConfig& cfg)
  {
    int in[2], out[2];
    if (pipe(in) != 0 || pipe(out) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_adddup2(&fa, in[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&fa, out[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&fa, out[1], STDERR_FILENO);
    for (int fd : {in[0], in[1], out[0], out[1]}) posix_spawn_file_actions_addclose(&fa, fd);
    std::vector<std::string> argv_s{cfg.path};
    argv_s.insert(argv_s.end(), cfg.args.begin(), cfg.args.end());
    std::vector<char*> argv;
    for (auto& a : argv_s) argv.push_back(a.data());
    argv.push_back(nullptr);
    const int rc = posix_spawnp(&pid_, cfg.path.c_str(), &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    close(in[0]);
    close(out[1]);
    to_ = in[1];
    from_ = out[0];
    if (rc != 0) {
      close(to_);
      close(from_);
      pid_ = -1;
      throw Error("cannot start solver '" + cfg.path + "': " + std::strerror(rc));
    }
    fcntl(from_, F_SETFL, fcntl(from_, F_GETFL) | O_NONBLOCK);
  }

  ~Child()
  {
    close_input();
    if (from_ >= 0) close(from_);
    if (pid_ > 0) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == 0) {
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
      }
    }
  }

  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  void send(const std::string& text)
  {
    std::size_t done = 0;
    while (done < text.size()) {
      ssize_t n = write(to_, text.data() + done, text.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error("solver closed its input: " + buffer_);
      }
      done += static_cast<std::size_t>(n);
    }
  }

  void close_input()
  {
    if (to_ >= 0) close(to_);
    to_ = -1;
  }

  /// Reads until `done(buffer)` holds or the stream ends. Returns false on
  /// timeout or cancellation.
  template <class Pred>
  bool read_until(Pred done, Clock::time_point deadline, const std::stop_token& stop, bool& eof)
  {
    eof = false;
    char chunk[4096];
    while (!done(buffer_)) {
      if (stop.stop_requested() || Clock::now() >= deadline) return false;
      pollfd p{from_, POLLIN, 0};
      const int r = poll(&p, 1, 50);
      if (r < 0 && errno != EINTR) throw Error("poll on solver output failed");
      if (r <= 0) continue;
      ssize_t n = read(from_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EAGAIN || errno == EINTR) continue;
        throw Error("reading solver output failed");
      }
      if (n == 0) {
        eof = true;
        return true;
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
    return true;
  }

  std::string& buffer() { return buffer_; }

private:
  pid_t pid_ = -1;
  int to_ = -1;
  int from_ = -1;
  std::string buffer_;
};

std::string first_line(const std::string& s)
{
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) return line;
  }
  return "";
}

bool complete_line(const std::string& s)
{
  return s.find('\n') != std::string::npos && !first_line(s.substr(0, s.rfind('\n') + 1)).empty();
}

bool balanced(const std::string& s)
{
  int depth = 0;
  bool seen = false, bar = false;
  for (char c : s) {
    if (c == '|') bar = !bar;
    if (bar) continue;
    if (c == '(') {
      ++depth;
      seen = true;
    } else if (c == ')') {
      --depth;
    }
  }
  return seen && depth == 0;
}

} // namespace

SolveOutcome run_query(const SolverConfig& cfg, const std::string& script, Clock::time_point deadline,
                       std::stop_token stop)
{
  static const bool ignore_sigpipe = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)ignore_sigpipe;

  SolveOutcome out;
  if (stop.stop_requested() || Clock::now() >= deadline) {
    out.reason = stop.stop_requested() ? "cancelled" : "budget exhausted";
    return out;
  }
  Child child(cfg);
  child.send(script);
  bool eof = false;
  if (!child.read_until(complete_line, deadline, stop, eof)) {
    out.reason = stop.stop_requested() ? "cancelled" : "budget exhausted";
    return out;
  }
  const std::string answer = first_line(child.buffer());
  if (answer == "sat") {
    out.result = SatResult::Sat;
    child.buffer().clear();
    child.send("(get-model)\n(exit)\n");
    child.close_input();
    if (!child.read_until(balanced, deadline, stop, eof)) {
      out.result = SatResult::Unknown;
      out.reason = stop.stop_requested() ? "cancelled" : "budget exhausted";
      return out;
    }
    out.model = child.buffer();
    if (out.model.rfind("(error", 0) == 0) throw Error("solver failed to produce a model: " + out.model);
    return out;
  }
  child.send("(exit)\n");
  child.close_input();
  if (answer == "unsat") {
    out.result = SatResult::Unsat;
  } else if (answer == "unknown") {
    out.reason = "solver returned unknown";
  } else {
    throw Error("solver error: " + (answer.empty() ? std::string("no output") : child.buffer()));
  }
  return out;
}

} // namespace hrmv::mc
