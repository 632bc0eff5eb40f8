#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

namespace j2k {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs argv[0] (looked up on PATH) to completion, feeding `input` to stdin.
/// Throws std::system_error if the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input = {},
                          const std::filesystem::path& cwd = {});

/// A long-lived child with piped stdin/stdout, for request/response protocols
/// such as `git cat-file --batch`.
class PipedProcess {
public:
    explicit PipedProcess(const std::vector<std::string>& argv);
    ~PipedProcess();

    PipedProcess(const PipedProcess&) = delete;
    PipedProcess& operator=(const PipedProcess&) = delete;

    void write(std::string_view data);
    void flush();
    /// Reads through the next '\n' (excluded). Returns false on EOF.
    bool read_line(std::string& line);
    /// Reads exactly n bytes. Returns false on short read.
    bool read_exact(std::size_t n, std::string& out);

private:
    pid_t pid_ = -1;
    std::FILE* in_ = nullptr;
    std::FILE* out_ = nullptr;
};

}  // namespace j2k
