#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <vector>

namespace adrc::detail {

using Wide = boost::multiprecision::cpp_bin_float_50;
using MatrixW = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
using VectorW = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;

// Relative to the magnitude of the cancelling terms; far above 50-digit
// rounding, far below any coefficient that survives cancellation legitimately.
inline const Wide kWideCancelTol = Wide("1e-30");

// Faddeev-LeVerrier terms N_k of adj(sI - M) with magnitude bounds and the
// rounded characteristic polynomial, ascending.
struct Faddeev {
    std::vector<MatrixW> terms;
    std::vector<MatrixW> bounds;
    std::vector<double> det;
};

Faddeev faddeev(const MatrixW& m);

// row^T adj(sI - M) col, ascending, rounded after contraction.
std::vector<double> adjugate_form(const Faddeev& f, const VectorW& row, const VectorW& col);

}  // namespace adrc::detail
