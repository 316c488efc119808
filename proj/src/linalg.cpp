#include "nettomo/linalg.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "nettomo/errors.hpp"

namespace nettomo {

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    if (n != a.cols()) throw InvalidArgument("expm needs a square matrix");
    if (n == 0) return a;

    // Higham (2005) coefficients and the theta_13 threshold.
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 == 0.0) return Eigen::MatrixXd::Identity(n, n);
    int squarings = 0;
    if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    const Eigen::MatrixXd x = a / std::ldexp(1.0, squarings);

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd x2 = x * x;
    const Eigen::MatrixXd x4 = x2 * x2;
    const Eigen::MatrixXd x6 = x4 * x2;

    const Eigen::MatrixXd u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2);
    const Eigen::MatrixXd u = x * (u_inner + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
    const Eigen::MatrixXd v_inner = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2);
    const Eigen::MatrixXd v = v_inner + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

Eigen::MatrixXd logm(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw InvalidArgument("logm needs a square matrix");
    if (a.rows() == 0) return a;
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success) throw ComputationError("eigensolver did not converge in logm");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> z = es.eigenvalues()(i);
        if (std::abs(z.imag()) <= 1e-12 * scale && z.real() <= 0.0) {
            throw IdentificationError("matrix logarithm branch is ambiguous: eigenvalue " +
                                      std::to_string(z.real()) +
                                      " is non-positive (sampling period too large, or a mode "
                                      "is uncontrollable or unobservable)");
        }
    }
    return a.log();
}

Eigen::MatrixXd expm_integral(const Eigen::MatrixXd& a, double delta) {
    const auto n = a.rows();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    aug.topLeftCorner(n, n) = a * delta;
    aug.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n) * delta;
    return expm(aug).topRightCorner(n, n);
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) ++r;
    }
    return r;
}

}  // namespace nettomo
