#pragma once

#include <stdexcept>
#include <string>

namespace covcal {

// Broad failure categories. The CLI maps these onto its exit codes:
// config -> 1, io/format/geometry -> 2, everything else -> 3.
enum class ErrorKind {
    config,      // bad run configuration / malformed config file
    io,          // missing or unreadable file
    format,      // file exists but cannot be decoded
    geometry,    // image too small for the requested patch/sample layout
    bounds,      // out-of-bounds pixel access request
    constraint,  // front-end admissibility violated
    fit,         // degenerate statistics input
    input,       // bad argument to a library call
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

}  // namespace covcal
