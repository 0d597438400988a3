#pragma once

#include <stdexcept>
#include <string>

namespace fbands {

/// Failure category. The CLI maps each category onto its own exit status.
enum class ErrorKind {
    Parse,    // malformed CSV or JSON input
    Config,   // invalid parameters or preconditions
    Numeric,  // factorization or other numerical breakdown
    Io,       // file system failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& what) { return {ErrorKind::Config, what}; }
inline Error parse_error(const std::string& what) { return {ErrorKind::Parse, what}; }
inline Error numeric_error(const std::string& what) { return {ErrorKind::Numeric, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::Io, what}; }

}  // namespace fbands
