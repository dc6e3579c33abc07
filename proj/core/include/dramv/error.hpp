#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dramv {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;

  std::string str() const;
};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the DRAMml frontend, trace loader and config loader. Carries
/// every diagnostic found, in source order.
class ParseError : public Error {
 public:
  ParseError(std::string origin, std::vector<Diagnostic> diags);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::vector<Diagnostic> diags_;
};

}  // namespace dramv
