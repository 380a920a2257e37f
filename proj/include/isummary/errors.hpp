#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isummary {

/// Base of all data errors. `name()` is the stable identifier printed by the
/// CLI on the diagnostic stream.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& reason)
      : Error("ParseError", "offset " + std::to_string(offset) + ": " + reason),
        offset_(offset),
        reason_(reason) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

#define ISUMMARY_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

ISUMMARY_DEFINE_ERROR(IoError);
ISUMMARY_DEFINE_ERROR(EmptyWorkload);
ISUMMARY_DEFINE_ERROR(NoRelevantQueries);
ISUMMARY_DEFINE_ERROR(InvalidRequest);
ISUMMARY_DEFINE_ERROR(InsufficientWorkload);
ISUMMARY_DEFINE_ERROR(SizeLimit);
ISUMMARY_DEFINE_ERROR(Disconnected);
ISUMMARY_DEFINE_ERROR(InvalidInstance);

#undef ISUMMARY_DEFINE_ERROR

}  // namespace isummary
