#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace natgrad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Shared numerical defaults. rank_tol is the relative singular-value /
// eigenvalue cutoff used for all rank decisions so that properness checks
// and pseudoinverses agree on what "zero" means.
inline constexpr double kRankTol = 1e-10;
inline constexpr double kFdTol = 1e-5;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonPositiveDefiniteMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainViolation : std::domain_error {
  using std::domain_error::domain_error;
};

struct BasePointMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AsymmetricInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositiveSemidefinite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InconsistentSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularWeight : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonPositiveDamping : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotProper : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownExample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainExit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_dim(const Vector& v, Eigen::Index n, const std::string& what) {
  if (v.size() != n) {
    throw DimensionMismatch(what + ": expected length " + std::to_string(n) +
                            ", got " + std::to_string(v.size()));
  }
}

}  // namespace natgrad
