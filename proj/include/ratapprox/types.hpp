#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ratapprox {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVector = Eigen::RowVectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Any scalar function s -> f(s) that the fitters can sample. Throws
// ratapprox::Error(ErrorKind::pole) where it is not defined.
using Oracle = std::function<Complex(Complex)>;

struct PolesZeros {
    std::vector<Complex> poles;
    std::vector<Complex> zeros;
};

} // namespace ratapprox
