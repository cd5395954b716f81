#pragma once

#include <stdexcept>
#include <string>

namespace qrnode {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Invalid or unreadable NodeConfig. `path` is the dotted field path, when known.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path))
    {
    }

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Numerical procedure could not produce a usable answer.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace qrnode
