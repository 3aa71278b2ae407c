#ifndef MCROUTE_ERROR_HPP
#define MCROUTE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcroute {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class GraphError : public Error {
public:
  using Error::Error;
};

class PartitionError : public Error {
public:
  using Error::Error;
};

class IndexFormatError : public Error {
public:
  using Error::Error;
};

class SkylineCapExceeded : public Error {
public:
  using Error::Error;
};

class ScoreFunctionError : public Error {
public:
  using Error::Error;
};

} // namespace mcroute

#endif // MCROUTE_ERROR_HPP
