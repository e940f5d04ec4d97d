#pragma once

#include <stdexcept>
#include <string>

namespace higan {

// Every failure surfaces as an Error subtype; kind() is the stable
// machine-readable tag the CLI prints as `error:<kind>:`.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HIGAN_ERROR_TYPE(Name)                                        \
  struct Name : Error {                                               \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}      \
  }

HIGAN_ERROR_TYPE(ShapeMismatch);
HIGAN_ERROR_TYPE(DegenerateSample);
HIGAN_ERROR_TYPE(BadSpec);
HIGAN_ERROR_TYPE(TraceMismatch);
HIGAN_ERROR_TYPE(EmptyBatch);
HIGAN_ERROR_TYPE(NonFiniteLoss);
HIGAN_ERROR_TYPE(EmptyDataset);
HIGAN_ERROR_TYPE(InvalidClipIndex);
HIGAN_ERROR_TYPE(ClassMismatch);
HIGAN_ERROR_TYPE(BadMagic);
HIGAN_ERROR_TYPE(VersionUnsupported);
HIGAN_ERROR_TYPE(TruncatedPayload);
HIGAN_ERROR_TYPE(NonFiniteValue);
HIGAN_ERROR_TYPE(ParseError);
HIGAN_ERROR_TYPE(IoError);

#undef HIGAN_ERROR_TYPE

}  // namespace higan
