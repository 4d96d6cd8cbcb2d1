//
// Copyright 2025 The IEForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "util/subprocess.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>

namespace ieforge {

namespace {

[[noreturn]] void ChildExec(const std::vector<std::string>& argv,
                            const std::string& workdir, int err_fd) {
  setpgid(0, 0);  // own process group, so a timeout kill reaps descendants too
  if (!workdir.empty() && chdir(workdir.c_str()) != 0) { _exit(127); }
  dup2(err_fd, STDERR_FILENO);
  close(err_fd);
  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const std::string& a : argv) { args.push_back(const_cast<char*>(a.c_str())); }
  args.push_back(nullptr);
  execvp(args[0], args.data());
  _exit(127);
}

}  // namespace

ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::string& workdir, double timeout_s) {
  if (argv.empty()) {
    throw std::invalid_argument("RunProcess: empty argv");
  }
  int err_pipe[2];
  if (pipe(err_pipe) != 0) {
    throw std::runtime_error("pipe failed: " + std::string(strerror(errno)));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(err_pipe[0]);
    close(err_pipe[1]);
    throw std::runtime_error("fork failed: " + std::string(strerror(errno)));
  }
  if (pid == 0) {
    close(err_pipe[0]);
    ChildExec(argv, workdir, err_pipe[1]);
  }
  close(err_pipe[1]);

  ProcessResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(timeout_s));
  bool child_running = true;
  bool pipe_open = true;
  char buf[4096];
  while (child_running) {
    if (pipe_open) {
      int wait_ms = 100;
      if (timeout_s > 0.0) {
        const auto remaining = deadline - std::chrono::steady_clock::now();
        const auto remaining_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count();
        if (remaining_ms <= 0) {
          wait_ms = 0;
        } else if (remaining_ms < wait_ms) {
          wait_ms = static_cast<int>(remaining_ms);
        }
      }
      struct pollfd pfd = {err_pipe[0], POLLIN, 0};
      if (poll(&pfd, 1, wait_ms) > 0) {
        const ssize_t n = read(err_pipe[0], buf, sizeof(buf));
        if (n > 0) {
          result.stderr_output.append(buf, static_cast<size_t>(n));
        } else {
          close(err_pipe[0]);
          pipe_open = false;
        }
      }
    } else {
      struct timespec ts = {0, 20 * 1000 * 1000};
      nanosleep(&ts, nullptr);
    }
    int status = 0;
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      child_running = false;
      if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
      } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
      }
    } else if (timeout_s > 0.0 && std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      child_running = false;
      result.timed_out = true;
      result.exit_code = -1;
    }
  }
  // Drain whatever the child left in the pipe. Orphaned grandchildren may
  // keep the write end open, so stop at the first empty poll rather than
  // waiting for EOF.
  while (pipe_open) {
    struct pollfd pfd = {err_pipe[0], POLLIN, 0};
    if (poll(&pfd, 1, 0) <= 0) break;
    const ssize_t n = read(err_pipe[0], buf, sizeof(buf));
    if (n <= 0) break;
    result.stderr_output.append(buf, static_cast<size_t>(n));
  }
  if (pipe_open) close(err_pipe[0]);
  return result;
}

}  // namespace ieforge
