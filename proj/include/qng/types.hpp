#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qng {

// Extended precision: witnesses near full loss differ from their bounds by
// ~1e-16, below the resolution of double.
using Real = long double;
using Complex = std::complex<Real>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (bad cutoff, s > 0, m > n, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Probability mass lost to Fock-space truncation exceeds the allowed budget.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Parallel or serial execution of scan kernels.
enum class Exec { serial, parallel };

}  // namespace qng
