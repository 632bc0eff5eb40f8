#include "j2k/process.hpp"

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <system_error>
#include <unistd.h>

extern char** environ;

namespace j2k {
namespace {

[[noreturn]] void throw_errno(const char* what) {
    throw std::system_error(errno, std::generic_category(), what);
}

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fds, O_CLOEXEC) != 0) throw_errno("pipe2");
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    int read_end() const { return fds[0]; }
    int write_end() const { return fds[1]; }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
    int release_read() { return std::exchange(fds[0], -1); }
    int release_write() { return std::exchange(fds[1], -1); }
};

std::vector<char*> make_argv(const std::vector<std::string>& argv) {
    std::vector<char*> out;
    out.reserve(argv.size() + 1);
    for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
    out.push_back(nullptr);
    return out;
}

pid_t spawn(const std::vector<std::string>& argv, int child_in, int child_out, int child_err,
            const std::filesystem::path& cwd) {
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, child_in, STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, child_out, STDOUT_FILENO);
    if (child_err >= 0) posix_spawn_file_actions_adddup2(&actions, child_err, STDERR_FILENO);
    if (!cwd.empty()) posix_spawn_file_actions_addchdir_np(&actions, cwd.c_str());

    auto args = make_argv(argv);
    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        errno = rc;
        throw_errno("posix_spawnp");
    }
    return pid;
}

int wait_for(pid_t pid) {
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) throw_errno("waitpid");
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          const std::filesystem::path& cwd) {
    Pipe in, out, err;
    const pid_t pid = spawn(argv, in.read_end(), out.write_end(), err.write_end(), cwd);
    in.close_read();
    out.close_write();
    err.close_write();

    ::signal(SIGPIPE, SIG_IGN);
    ProcessResult result;
    std::size_t written = 0;
    if (input.empty()) in.close_write();
    else ::fcntl(in.write_end(), F_SETFL, ::fcntl(in.write_end(), F_GETFL) | O_NONBLOCK);

    char buf[65536];
    while (out.read_end() >= 0 || err.read_end() >= 0) {
        pollfd fds[3];
        nfds_t n = 0;
        int out_idx = -1, err_idx = -1, in_idx = -1;
        if (out.read_end() >= 0) { out_idx = static_cast<int>(n); fds[n++] = {out.read_end(), POLLIN, 0}; }
        if (err.read_end() >= 0) { err_idx = static_cast<int>(n); fds[n++] = {err.read_end(), POLLIN, 0}; }
        if (in.write_end() >= 0) { in_idx = static_cast<int>(n); fds[n++] = {in.write_end(), POLLOUT, 0}; }
        if (::poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            throw_errno("poll");
        }
        auto drain = [&](int idx, Pipe& p, std::string& sink) {
            if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP | POLLERR))) return;
            const ssize_t r = ::read(p.read_end(), buf, sizeof buf);
            if (r > 0) sink.append(buf, static_cast<std::size_t>(r));
            else if (r == 0 || errno != EINTR) p.close_read();
        };
        drain(out_idx, out, result.out);
        drain(err_idx, err, result.err);
        if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t w = ::write(in.write_end(), input.data() + written, input.size() - written);
            if (w > 0) written += static_cast<std::size_t>(w);
            if (w < 0 && errno != EINTR && errno != EAGAIN) in.close_write();
            if (written == input.size()) in.close_write();
        }
    }
    in.close_write();
    result.exit_code = wait_for(pid);
    return result;
}

PipedProcess::PipedProcess(const std::vector<std::string>& argv) {
    Pipe in, out;
    pid_ = spawn(argv, in.read_end(), out.write_end(), -1, {});
    in.close_read();
    out.close_write();
    ::signal(SIGPIPE, SIG_IGN);
    in_ = ::fdopen(in.release_write(), "w");
    out_ = ::fdopen(out.release_read(), "r");
    if (!in_ || !out_) throw_errno("fdopen");
}

PipedProcess::~PipedProcess() {
    if (in_) std::fclose(in_);
    if (out_) std::fclose(out_);
    if (pid_ > 0) {
        try {
            wait_for(pid_);
        } catch (...) {
        }
    }
}

void PipedProcess::write(std::string_view data) {
    if (std::fwrite(data.data(), 1, data.size(), in_) != data.size()) throw_errno("write to child");
}

void PipedProcess::flush() {
    if (std::fflush(in_) != 0) throw_errno("flush to child");
}

bool PipedProcess::read_line(std::string& line) {
    line.clear();
    int c;
    while ((c = std::fgetc(out_)) != EOF) {
        if (c == '\n') return true;
        line.push_back(static_cast<char>(c));
    }
    return !line.empty();
}

bool PipedProcess::read_exact(std::size_t n, std::string& out) {
    out.resize(n);
    return std::fread(out.data(), 1, n, out_) == n;
}

}  // namespace j2k
