#pragma once

#include <stdexcept>
#include <string>

namespace tmlog {

// Thrown when an argument violates an operation's precondition.
// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

enum class Status { ok, divergent, non_converged };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::ok: return "ok";
    case Status::divergent: return "divergent";
    case Status::non_converged: return "non_converged";
    }
    return "?";
}

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ValidationError(what);
}

} // namespace tmlog
