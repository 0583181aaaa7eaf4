#include "optele/expm.h"

#include <cmath>

namespace optele {

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  using Mat = Eigen::MatrixXcd;
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  Mat s = a / std::ldexp(1.0, squarings);

  const Mat id = Mat::Identity(n, n);
  Mat a2 = s * s;
  Mat a4 = a2 * a2;
  Mat a6 = a4 * a2;
  Mat u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat u = s * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  Mat v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Mat v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace optele
