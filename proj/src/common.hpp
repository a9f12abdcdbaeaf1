#pragma once

#include <cstdarg>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vesicle {

// Error categories; the C API and CLI map these 1:1 onto status/exit codes.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// printf-style warning to stderr, prefixed. Kept free of any global state so
// concurrent simulations can log safely.
void log_warn(const char* fmt, ...);

std::string format_string(const char* fmt, ...);

// FNV-1a over a byte range; used for config hashes and test sentinels.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ull);

}  // namespace vesicle
