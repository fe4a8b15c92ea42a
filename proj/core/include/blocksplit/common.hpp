#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace blocksplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when a caller hands in something the contract rejects
/// (dimension mismatch, invalid constants, malformed options).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An oracle or an iterate produced NaN/Inf. Runs abort on this.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, const char* what);
void require_finite(double v, const char* what);

} // namespace blocksplit
