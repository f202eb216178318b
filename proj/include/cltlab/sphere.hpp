#pragma once

#include <Eigen/Dense>

#include "cltlab/rng.hpp"

namespace cltlab {

/// `count` points uniform on S^{d-1}, one per column, by normalizing Gaussian
/// vectors. Column j depends only on (rng, j).
Eigen::MatrixXd sphere_sample(int d, long count, const RngStream& rng);

}  // namespace cltlab
