#pragma once

#include <Eigen/Dense>

namespace nettomo {

// Scaling and squaring with a degree-13 Pade approximant.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

// Principal matrix logarithm. Throws IdentificationError when an eigenvalue
// is real and non-positive, where the principal branch is undefined.
Eigen::MatrixXd logm(const Eigen::MatrixXd& a);

// Integral of exp(a t) over [0, delta], read off the augmented exponential of
// [[a, I], [0, 0]] * delta.
Eigen::MatrixXd expm_integral(const Eigen::MatrixXd& a, double delta);

// Numerical rank: singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol);

}  // namespace nettomo
