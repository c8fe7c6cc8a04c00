#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace sqbound {

// Thrown when a special-function value leaves the double range. Carries the
// evaluation point so batch drivers can report which input overflowed instead
// of propagating a bare inf into sample means.
class overflow_error : public std::range_error {
public:
    overflow_error(double p, double x, double t, const std::string& what_arg)
        : std::range_error(what_arg), p(p), x(x), t(t) {}
    double p;
    double x;
    double t;
};

// Quadrature failed to reach the requested tolerance within the refinement
// budget. `achieved` is the error estimate actually attained.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(double achieved, double requested, const std::string& what_arg)
        : std::runtime_error(what_arg), achieved(achieved), requested(requested) {}
    double achieved;
    double requested;
};

// Root scan exhausted its range without a sign change.
class bracket_error : public std::runtime_error {
public:
    explicit bracket_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

namespace detail {

template <typename... Args>
std::string msg(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

} // namespace detail

// Precondition check; the message should state the violated inequality.
inline void require(bool cond, const std::string& what_arg) {
    if (!cond) throw std::invalid_argument(what_arg);
}

} // namespace sqbound
