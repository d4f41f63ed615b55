#ifndef PHIOTDR_ERRORS_HPP
#define PHIOTDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace phiotdr {

// Exit codes used by the CLI: 0 success, 2 config, 3 data, 4 I/O.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 2;
    static constexpr const char* code = "E_CONFIG";
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 3;
    static constexpr const char* code = "E_DATA";
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 4;
    static constexpr const char* code = "E_IO";
};

}  // namespace phiotdr

#endif
