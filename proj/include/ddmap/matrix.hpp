#pragma once

#include <Eigen/Core>

namespace ddmap {

/// Row-major so that a cycle, or an embedded point, is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace ddmap
