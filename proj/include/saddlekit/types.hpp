#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace saddlekit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedOracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_size(const Vector& v, Index n, const std::string& what) {
  if (v.size() != n)
    throw ShapeError(what + ": expected length " + std::to_string(n) +
                     ", got " + std::to_string(v.size()));
}

}  // namespace saddlekit
