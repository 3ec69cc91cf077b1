#pragma once

// Runs the command-line binary and captures stdout/stderr/exit code.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace test_support {

inline std::string& cli_path() {
    static std::string path;
    return path;
}

// Strips "--cli=<path>" out of argv and remembers it; returns the remaining
// argument count.
inline int capture_cli_flag(int argc, char** argv) {
    int out = 0;
    for (int i = 0; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--cli=", 0) == 0)
            cli_path() = arg.substr(6);
        else
            argv[out++] = argv[i];
    }
    return out;
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr combined
};

inline CliResult run_cli(const std::string& args) {
    CliResult result;
    std::string command = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace test_support
