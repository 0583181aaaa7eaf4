#ifndef OPTELE_EXPM_H_
#define OPTELE_EXPM_H_

#include <Eigen/Dense>

namespace optele {

// Matrix exponential by scaling and squaring with a [13/13] Pade approximant
// (Higham 2005). Accurate to a few ulps times the squaring count for
// well-conditioned inputs such as anti-Hermitian generators.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace optele

#endif  // OPTELE_EXPM_H_
