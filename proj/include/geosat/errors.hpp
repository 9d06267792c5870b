#pragma once

#include <stdexcept>
#include <string>

namespace geosat
{
//---------------------------------------------------------------------------//
/*!
 * Raised when an argument lies outside the domain of a model quantity
 * (latitude beyond the pole, distance outside the orbit-arc support, N = 0).
 */
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//---------------------------------------------------------------------------//
/*!
 * Raised when adaptive quadrature exhausts its subdivision budget.
 *
 * The best available estimate and its error are carried so callers that can
 * tolerate a loose result (plotting sweeps) may still use it.
 */
class ConvergenceError : public std::runtime_error
{
  public:
    ConvergenceError(std::string const& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error)
    {
    }

    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

  private:
    double estimate_;
    double error_;
};

//---------------------------------------------------------------------------//
//! Malformed two-line element input.
class TleParseError : public std::runtime_error
{
  public:
    TleParseError(std::string const& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what)
        , line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace geosat
