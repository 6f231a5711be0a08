#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spinel {

// Base for every error the library raises on bad input or exceeded limits.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnassignedVariable : public Error {
 public:
  explicit UnassignedVariable(std::uint32_t index)
      : Error("spin s" + std::to_string(index) + " is not assigned"), index_(index) {}

  std::uint32_t index() const noexcept { return index_; }

 private:
  std::uint32_t index_;
};

// A size cap (FWHT neighborhood, oracle enumeration, branch count) was hit.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t size, std::size_t cap)
      : Error(what + ": size " + std::to_string(size) + " exceeds cap " + std::to_string(cap)),
        size_(size),
        cap_(cap) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t size_;
  std::size_t cap_;
};

}  // namespace spinel
