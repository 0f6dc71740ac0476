#ifndef PDPROBE_ERRORS_HPP
#define PDPROBE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdprobe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

/// A matrix-vector product or an iterate produced a NaN or infinity.
class OverflowError : public Error
{
public:
    using Error::Error;
};

/// Malformed Matrix Market input. `line()` is 1-based; 0 means "no particular line".
class ParseError : public Error
{
public:
    ParseError(const std::string& msg, std::size_t line) :
        Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        m_line(line)
    {}

    std::size_t line() const noexcept { return m_line; }

private:
    std::size_t m_line;
};

class IoError : public Error
{
public:
    using Error::Error;
};

/// Iterative solve ran out of its iteration budget.
class NoConvergenceError : public Error
{
public:
    NoConvergenceError(const std::string& msg, double relative_residual) :
        Error(msg + " (relative residual " + std::to_string(relative_residual) + ")"),
        m_residual(relative_residual)
    {}

    double relative_residual() const noexcept { return m_residual; }

private:
    double m_residual;
};

/// The operator is singular to working precision.
class SingularOperatorError : public Error
{
public:
    using Error::Error;
};

/// Power iteration started from (or fell into) the kernel of the operator.
class DegenerateStartError : public Error
{
public:
    using Error::Error;
};

/// The two raw extremal estimates cannot form an interval mu_lo < mu_hi.
class EstimationInconsistentError : public Error
{
public:
    EstimationInconsistentError(const std::string& msg, double lambda_tilde_1, double lambda_tilde_n) :
        Error(msg), m_lambda_1(lambda_tilde_1), m_lambda_n(lambda_tilde_n)
    {}

    double lambda_tilde_1() const noexcept { return m_lambda_1; }
    double lambda_tilde_n() const noexcept { return m_lambda_n; }

private:
    double m_lambda_1;
    double m_lambda_n;
};

}  // namespace pdprobe

#endif  // PDPROBE_ERRORS_HPP
