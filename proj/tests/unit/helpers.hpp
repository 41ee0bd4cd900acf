#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace testutil {

inline std::string data_dir() {
    const char* env = std::getenv("CASCADE_DATA_DIR");
    return env ? env : "data";
}

inline std::string data_path(const std::string& rel) { return data_dir() + "/" + rel; }

inline std::string cli_path() {
    const char* env = std::getenv("CASCADE_CLI");
    if (!env) throw std::runtime_error("CASCADE_CLI is not set");
    return env;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

// Unique scratch path; the file is not created.
inline std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return (std::filesystem::temp_directory_path() /
            ("cascade_test_" + std::to_string(::getpid()) + "_" + tag + "_" +
             std::to_string(counter++)))
        .string();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs `cli_path() + " " + args` through the shell, capturing both streams.
inline CliResult run_cli(const std::string& args) {
    std::string err_path = temp_path("stderr");
    std::string command = cli_path() + " " + args + " 2>" + err_path;

    CliResult result;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + command);
    char buffer[4096];
    std::size_t n;
    while ((n = ::fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
    int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    result.err = read_file(err_path);
    std::filesystem::remove(err_path);
    return result;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace testutil
