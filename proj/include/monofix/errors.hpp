#ifndef MONOFIX_ERRORS_HPP
#define MONOFIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace monofix {

// Structured domain errors. `code` is a stable machine-readable tag used by
// the CLI to pick exit codes and by tests to assert on the failure class.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw DomainError(code, what);
}

inline void require(bool ok, const std::string& code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace monofix

#endif
