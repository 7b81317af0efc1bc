#include "parsefit/sampling.hpp"

#include <Eigen/QR>

#include <algorithm>

#include "parsefit/approx.hpp"
#include "parsefit/linalg.hpp"

namespace parsefit {

Matrix random_unitary(Index n, std::mt19937_64& rng) {
  if (n == 0) return Matrix(0, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = Scalar(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phases so the distribution is Haar
  for (Index j = 0; j < n; ++j) {
    const Scalar diag = r(j, j);
    const double mag = std::abs(diag);
    q.col(j) *= mag > 0 ? diag / mag : Scalar(1.0, 0.0);
  }
  return q;
}

Frame random_frame(Index rows, Index cols, std::mt19937_64& rng, double s_max,
                   double zero_prob) {
  std::uniform_real_distribution<double> unif(0.0, s_max);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const Index m = std::min(rows, cols);
  RealVector sigma(m);
  for (Index i = 0; i < m; ++i)
    sigma(i) = coin(rng) < zero_prob ? 0.0 : unif(rng);
  std::sort(sigma.data(), sigma.data() + m, std::greater<>());
  if (m > 0 && sigma(0) == 0.0) sigma(0) = unif(rng) + 1e-3;  // keep a frame

  Matrix f = Matrix::Zero(rows, cols);
  for (Index i = 0; i < m; ++i) f(i, i) = sigma(i);
  return Frame{random_unitary(rows, rng) * f * random_unitary(cols, rng).adjoint(),
               ""};
}

ParsevalFrame sample_parseval_in_component(const Frame& f, int k,
                                           std::mt19937_64& rng,
                                           const Tolerances& tol) {
  const ComponentReport report = component_report(f, tol);
  if (!report.contains(k))
    throw InfeasibleComponentError(k, "index set is [" + report.lower.str() +
                                          ", " + report.upper.str() + "]");
  const Index rows = f.synthesis.rows();
  const Index cols = f.synthesis.cols();
  const Index rank = static_cast<Index>(report.n2.value()) - k;
  Matrix j = Matrix::Zero(rows, cols);
  for (Index i = 0; i < rank; ++i) j(i, i) = 1.0;
  return ParsevalFrame{random_unitary(rows, rng) * j *
                       random_unitary(cols, rng).adjoint()};
}

}  // namespace parsefit
