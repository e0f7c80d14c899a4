// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <stdexcept>
#include <string>

namespace splatnav {

/// Invalid configuration or argument contract violation (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File or stream failure (CLI exit code 2).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : ConfigError {
    explicit DimensionMismatch(const std::string& msg) : ConfigError(msg) {}
};

struct SpecMismatch : ConfigError {
    explicit SpecMismatch(const std::string& msg) : ConfigError(msg) {}
};

struct EmptyBand : ConfigError {
    explicit EmptyBand(const std::string& msg) : ConfigError(msg) {}
};

struct EmptyInput : ConfigError {
    explicit EmptyInput(const std::string& msg) : ConfigError(msg) {}
};

}  // namespace splatnav
