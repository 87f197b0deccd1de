#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace iga {

using Real = double;
using Index = Eigen::Index;

using Vector2 = Eigen::Matrix<Real, 2, 1>;
using Matrix2 = Eigen::Matrix<Real, 2, 2>;
using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using MatrixX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using SparseMatrix = Eigen::SparseMatrix<Real>;
using Triplet = Eigen::Triplet<Real>;

// Invalid caller-supplied argument (bad degree, negative weight, unknown key...).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Query outside the parametric or physical domain.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate or non-invertible geometry (vanishing Jacobian, failed inversion).
struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-finite values, failed factorization, stiff blow-up.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed files, unknown config keys, unwritable outputs.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace iga
