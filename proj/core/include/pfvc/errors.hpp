#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pfvc {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad dimensions, unknown
// granularity, uninitialized predictor, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input bytes could not be parsed: truncation, bad magic, inconsistent
// lengths, or an entropy-coded payload that does not decode cleanly.
// offset() is the byte position of the failure inside the buffer being
// parsed; record() names the inter-frame record when one is involved.
class CorruptStream : public Error {
 public:
  CorruptStream(const std::string& what, std::size_t offset,
                std::optional<std::size_t> record = std::nullopt);

  std::size_t offset() const noexcept { return offset_; }
  std::optional<std::size_t> record() const noexcept { return record_; }
  // Message without the position suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
  std::optional<std::size_t> record_;
};

}  // namespace pfvc
