#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace blowlab {

// Error with a stable machine-readable code ("too-coarse", "M-too-small", ...)
// next to the human-readable message.  Tests match on code().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

} // namespace blowlab
