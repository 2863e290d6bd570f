#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forcectl {

/// Process exit codes shared by every CLI command.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kCompile = 2,
  kNonConvergence = 3,
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid configuration value or violated precondition on constructed data.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &what) : Error(ExitCode::kValidation, what) {}
};

/// Malformed scene, program or config text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string &message)
      : Error(ExitCode::kValidation,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class CompileError : public Error {
 public:
  explicit CompileError(const std::string &what) : Error(ExitCode::kCompile, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(ExitCode::kIo, what) {}
};

}  // namespace forcectl
