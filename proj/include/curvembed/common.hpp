#pragma once
#include <stdexcept>
#include <string>

namespace curvembed {

// All library failures throw this; the CLI maps it to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
}

}  // namespace curvembed
