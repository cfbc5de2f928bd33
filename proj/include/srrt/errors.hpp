#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace srrt {

// Argument errors use std::invalid_argument directly. The types below carry
// the extra context callers need to report a failure precisely.

/// An operation was called on an object that has not been set up yet.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested mode needs data that is not available (e.g. ground truth).
class UnsupportedMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FrameReadError : public std::runtime_error {
 public:
  FrameReadError(std::size_t index, const std::string& what)
      : std::runtime_error("frame " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A text record could not be parsed; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(path) {}
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

class SamplingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A synthetic motion description cannot be rendered as requested.
class SpecInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srrt
