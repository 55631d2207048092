#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace satqkd {

/// Input outside the domain of a model function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Quadrature or special-function evaluation that failed to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration problem tied to one dotted field path, e.g. "orbit.altitude_m".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A loss-channel model failed while assembling a budget.
class ChannelError : public std::runtime_error {
public:
    ChannelError(std::string channel, std::string detail)
        : std::runtime_error("channel '" + channel + "': " + detail),
          channel_(std::move(channel)),
          detail_(std::move(detail)) {}

    const std::string& channel() const noexcept { return channel_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string channel_;
    std::string detail_;
};

using WarningHandler = std::function<void(const std::string&)>;

// Warnings go to stderr unless a handler is installed. Not synchronized:
// install the handler before starting worker threads.
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace satqkd
