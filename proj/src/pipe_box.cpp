#include <cerrno>
#include <csignal>
#include <cstring>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

#include "reactest/blackbox.hpp"
#include "reactest/errors.hpp"

namespace reactest {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

} // namespace

PipeBlackBox::PipeBlackBox(const std::string& command)
    : client_([this](const std::string& request) { return transact(request); }) {
    // A child that exits early must not kill us with SIGPIPE.
    std::signal(SIGPIPE, SIG_IGN);
    int down[2];
    int up[2];
    if (pipe(down) != 0) fail("pipe");
    if (pipe(up) != 0) {
        close(down[0]);
        close(down[1]);
        fail("pipe");
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {down[0], down[1], up[0], up[1]}) close(fd);
        fail("fork");
    }
    if (pid == 0) {
        dup2(down[0], STDIN_FILENO);
        dup2(up[1], STDOUT_FILENO);
        for (int fd : {down[0], down[1], up[0], up[1]}) close(fd);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(down[0]);
    close(up[1]);
    to_child_ = down[1];
    from_child_ = up[0];
    pid_ = pid;
}

PipeBlackBox::~PipeBlackBox() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (pid_ > 0) {
        int status = 0;
        waitpid(pid_, &status, 0);
    }
}

std::string PipeBlackBox::transact(const std::string& request) {
    const std::string line = request + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw ProtocolError("box process closed its input");
        }
        written += static_cast<std::size_t>(n);
    }
    while (true) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string reply = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return reply;
        }
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            throw ProtocolError("box process ended before answering '" + request + "'");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

} // namespace reactest
