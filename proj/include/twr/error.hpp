#pragma once

#include <stdexcept>
#include <string>

namespace twr {

// Every failure raised by the library carries a stable machine-readable code
// (for example "LoopContraction" or "NotOrientable") next to the message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

}  // namespace twr
