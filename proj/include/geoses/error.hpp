#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace geoses {

// Exit codes used by the CLI; one class per error family.
enum class ExitCode : int {
    ok = 0,
    usage = 1,    // bad command line (reserved for the CLI parser)
    config = 2,   // invalid configuration, catalog, or mapping
    parse = 3,    // malformed input file
    data = 4,     // inconsistent data (missing units, misaligned ids, ...)
    numeric = 5,  // degenerate numerical situation (constant column, singular fit)
    io = 6,       // filesystem failure
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ExitCode code() const { return code_; }

private:
    ExitCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ExitCode::config, msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(ExitCode::parse, msg) {}
};
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(ExitCode::data, msg) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(ExitCode::numeric, msg) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ExitCode::io, msg) {}
};

// Non-fatal findings accumulated during a run; surfaced on stderr and in the
// run manifest.
struct Warnings {
    std::vector<std::string> messages;

    void add(std::string msg) { messages.push_back(std::move(msg)); }
    bool empty() const { return messages.empty(); }
    std::size_t size() const { return messages.size(); }
};

}  // namespace geoses
