#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadtrot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Foot target outside the reachable workspace of a leg.
class UnreachableError : public Error {
 public:
  using Error::Error;
};

// Gait parameters that pass range checks but admit no timeline
// (no stance time left, or retraction eats the whole swing).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class KeyframeOrderError : public Error {
 public:
  using Error::Error;
};

class NumericalDivergence : public Error {
 public:
  NumericalDivergence(const std::string& what, long tick)
      : Error(what + " (tick " + std::to_string(tick) + ")"), tick_(tick) {}
  long tick() const { return tick_; }

 private:
  long tick_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid configuration";
    for (std::size_t i = 0; i < items.size(); ++i) {
      out += (i == 0 ? ": " : "; ");
      out += items[i];
    }
    return out;
  }
  std::vector<std::string> problems_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadtrot
