#include "cltlab/sphere.hpp"

#include "cltlab/errors.hpp"

namespace cltlab {

Eigen::MatrixXd sphere_sample(int d, long count, const RngStream& rng) {
  if (d < 1) throw DomainError("sphere_sample: dimension must be >= 1");
  if (count < 1) throw DomainError("sphere_sample: count must be >= 1");
  Eigen::MatrixXd out(d, count);
  Generator gen(rng);
  for (long j = 0; j < count; ++j) {
    double norm2 = 0.0;
    do {
      for (int i = 0; i < d; ++i) out(i, j) = gen.normal();
      norm2 = out.col(j).squaredNorm();
    } while (norm2 == 0.0);
    out.col(j) /= std::sqrt(norm2);
  }
  return out;
}

}  // namespace cltlab
