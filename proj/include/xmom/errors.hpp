#ifndef XMOM_ERRORS_HPP
#define XMOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xmom {

// Violated caller contract (bad parameter, parse failure, mismatched inputs).
// The CLI maps this to exit code 1.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerically degenerate situation detected at runtime (singular moment
// matrix, zero-variance score input, unstable denominator). Exit code 2.
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace xmom

#endif
