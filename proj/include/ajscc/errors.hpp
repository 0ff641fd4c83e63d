#pragma once

#include <stdexcept>
#include <string>

namespace ajscc {

// Every library failure derives from Error so the CLI can report a stable kind.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Invalid configuration (non-positive ranges, too few levels, mismatched nesting...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// An input value lies outside its declared range.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error("range", what) {}
};

// A signal carries no usable information (all-zero capture, non-finite samples).
class SignalError : public Error {
public:
    explicit SignalError(const std::string& what) : Error("signal", what) {}
};

// File or text I/O failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace ajscc
