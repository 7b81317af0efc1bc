#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parsefit/linalg.hpp"

using namespace parsefit;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix random_matrix(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = Scalar(gauss(rng), gauss(rng));
  return m;
}

Matrix random_unitary_qr(Index n, std::mt19937_64& rng) {
  const Matrix g = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return Matrix(qr.householderQ());
}

Matrix random_skew_hermitian(Index n, std::mt19937_64& rng) {
  const Matrix g = random_matrix(n, n, rng);
  return 0.5 * (g - g.adjoint());
}

std::vector<double> singular_values(const Matrix& m) {
  const auto s = svd(m).sigma;
  return {s.data(), s.data() + s.size()};
}

}  // namespace

TEST_CASE("svd basics") {
  SUBCASE("identity") {
    const auto f = svd(identity(2));
    CHECK(f.sigma(0) == doctest::Approx(1.0));
    CHECK(f.sigma(1) == doctest::Approx(1.0));
    CHECK(f.groups.size() == 1);
    CHECK(f.rank == 2);
  }
  SUBCASE("diagonal is sorted nonincreasing") {
    const auto f = svd(from_rows({{2, 0}, {0, 3}}));
    CHECK(f.sigma(0) == doctest::Approx(3.0));
    CHECK(f.sigma(1) == doctest::Approx(2.0));
    CHECK(f.groups.size() == 2);
  }
  SUBCASE("wide rank one") {
    const auto f = svd(from_rows({{1, 1}}));
    REQUIRE(f.sigma.size() == 1);
    CHECK(f.sigma(0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(f.rank == 1);
  }
  SUBCASE("degenerate shapes are legal") {
    const auto f = svd(Matrix(0, 3));
    CHECK(f.sigma.size() == 0);
    CHECK(f.rank == 0);
    CHECK(f.right.rows() == 3);
  }
  SUBCASE("non-finite input rejected") {
    Matrix m(1, 1);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(m), DomainError);
  }
}

TEST_CASE("svd properties on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = 1 + static_cast<Index>(rng() % 6);
    const Index c = 1 + static_cast<Index>(rng() % 6);
    const Matrix m = random_matrix(r, c, rng);
    const auto f = svd(m);
    CHECK((f.left.adjoint() * f.left - identity(r)).norm() <= 1e-8);
    CHECK((f.right.adjoint() * f.right - identity(c)).norm() <= 1e-8);
    CHECK((f.reconstruct() - m).norm() <= 1e-8);
    for (Index i = 0; i + 1 < f.sigma.size(); ++i)
      CHECK(f.sigma(i) >= f.sigma(i + 1));
  }
}

TEST_CASE("sigma invariant under unitary factors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 5);
    const Matrix m = random_matrix(n, n, rng);
    const Matrix u = random_unitary_qr(n, rng);
    const Matrix v = random_unitary_qr(n, rng);
    const auto s0 = singular_values(m);
    const auto s1 = singular_values(u * m * v);
    for (std::size_t i = 0; i < s0.size(); ++i)
      CHECK(std::abs(s0[i] - s1[i]) <= 1e-9);
  }
}

TEST_CASE("polar decomposition") {
  SUBCASE("positive diagonal gives identity factor") {
    const auto p = polar_decompose(from_rows({{2, 0}, {0, 3}}));
    CHECK((p.isometric - identity(2)).norm() <= 1e-12);
  }
  SUBCASE("zero matrix") {
    const auto p = polar_decompose(Matrix::Zero(2, 3));
    CHECK(p.isometric.norm() == 0.0);
  }
  SUBCASE("row vector") {
    const auto p = polar_decompose(from_rows({{1, 1}}));
    CHECK(std::abs(p.isometric(0, 0).real() - 1 / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(p.isometric(0, 1).real() - 1 / std::sqrt(2.0)) <= 1e-12);
    const Matrix proj = p.isometric.adjoint() * p.isometric;
    CHECK((proj * proj - proj).norm() <= 1e-12);
    CHECK(matrix_rank(proj) == 1);
  }
  SUBCASE("recombination on 1000 random matrices") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
      const Index r = 1 + static_cast<Index>(rng() % 5);
      const Index c = 1 + static_cast<Index>(rng() % 5);
      const Matrix m = random_matrix(r, c, rng);
      const auto p = polar_decompose(m);
      CHECK((p.isometric * p.modulus - m).norm() <= 1e-8);
      CHECK(is_partial_isometry(p.isometric, 1e-8));
      // kernels agree: U annihilates the null directions of M
      const auto f = svd(m);
      for (Index j = f.rank; j < c; ++j)
        CHECK((p.isometric * f.right.col(j)).norm() <= 1e-8);
    }
  }
}

TEST_CASE("hs_distance") {
  const Matrix a = from_rows({{0.4, 0}, {0, 0.6}});
  CHECK(hs_distance(a, a) == 0.0);
  CHECK(hs_distance(a, identity(2)) == doctest::Approx(std::sqrt(0.52)).epsilon(1e-12));
  const Matrix b = from_rows({{1, 1}});
  const Matrix c = from_rows({{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}});
  const double expected = std::sqrt(2.0 * std::pow(1.0 - 1 / std::sqrt(2.0), 2));
  CHECK(hs_distance(b, c) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(hs_distance(a, b), DimensionError);
}

TEST_CASE("is_partial_isometry") {
  CHECK(is_partial_isometry(identity(2), 1e-8));
  CHECK_FALSE(is_partial_isometry(from_rows({{0.5, 0}, {0, 1}}), 1e-8));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix q = random_unitary_qr(4, rng).leftCols(2);
    CHECK(is_partial_isometry(q, 1e-8));
  }
}

TEST_CASE("unitary log and matrix exp") {
  SUBCASE("identity and zero") {
    CHECK(unitary_log(identity(3)).norm() <= 1e-12);
    CHECK((matrix_exp(Matrix::Zero(3, 3)) - identity(3)).norm() <= 1e-12);
  }
  SUBCASE("principal log of -1") {
    Matrix w(1, 1);
    w(0, 0) = -1.0;
    const Matrix a = unitary_log(w);
    CHECK(std::abs(a(0, 0).imag() - M_PI) <= 1e-12);
    CHECK(std::abs(a(0, 0).real()) <= 1e-12);
  }
  SUBCASE("exp of i pi") {
    Matrix a(1, 1);
    a(0, 0) = Scalar(0.0, M_PI);
    CHECK(std::abs(matrix_exp(a)(0, 0).real() + 1.0) <= 1e-12);
  }
  SUBCASE("rotation by pi/3") {
    const double t = M_PI / 3;
    const Matrix w = from_rows({{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}});
    const Matrix a = unitary_log(w);
    CHECK((a + a.adjoint()).norm() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Scalar(0, 1) * a);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(-t).epsilon(1e-10));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(t).epsilon(1e-10));
    CHECK((matrix_exp(a) - w).norm() <= 1e-10);
  }
  SUBCASE("exp(A) exp(-A) = I for random skew-Hermitian") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix a = random_skew_hermitian(4, rng);
      CHECK((matrix_exp(a) * matrix_exp(-a) - identity(4)).norm() <= 1e-10);
      CHECK((matrix_exp(a).adjoint() * matrix_exp(a) - identity(4)).norm() <= 1e-10);
    }
  }
  SUBCASE("log then exp round-trips random unitaries") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = 1 + static_cast<Index>(rng() % 5);
      const Matrix w = random_unitary_qr(n, rng);
      CHECK((matrix_exp(unitary_log(w)) - w).norm() <= 1e-8);
    }
  }
  SUBCASE("non-unitary input rejected") {
    CHECK_THROWS_AS(unitary_log(from_rows({{2.0}})), DomainError);
  }
}

TEST_CASE("simultaneous svd") {
  SUBCASE("already diagonal") {
    const Matrix f = from_rows({{2, 0}, {0, 0.3}});
    const Matrix y = from_rows({{1, 0}, {0, 0}});
    const auto s = simultaneous_svd(f, y);
    CHECK(s.f_diag(0) == doctest::Approx(2.0));
    CHECK(s.f_diag(1) == doctest::Approx(0.3));
    CHECK(s.y_diag(0) == 1);
    CHECK(s.y_diag(1) == 0);
    CHECK((s.left_basis * s.left_basis.adjoint() - identity(2)).norm() <= 1e-10);
  }
  SUBCASE("negative sign case") {
    Matrix f(1, 1), y(1, 1);
    f(0, 0) = 0.5;
    y(0, 0) = -1.0;
    const auto s = simultaneous_svd(f, y);
    CHECK(s.y_diag(0) == -1);
    CHECK(s.f_diag(0) == doctest::Approx(0.5));
  }
  SUBCASE("commutation failure rejected") {
    const Matrix f = from_rows({{2, 0}, {0, 0.3}});
    const Matrix y = from_rows({{0, 1}, {1, 0}});
    CHECK_THROWS_AS(simultaneous_svd(f, y), DomainError);
  }
  SUBCASE("repeated singular value with a mixing partial isometry") {
    // F = s I and Y a rank-1 projection onto a rotated direction.
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix f = 0.7 * identity(2);
      Eigen::Vector2cd v;
      std::normal_distribution<double> gauss(0.0, 1.0);
      v << Scalar(gauss(rng), gauss(rng)), Scalar(gauss(rng), gauss(rng));
      v.normalize();
      const Matrix y = v * v.adjoint();
      const auto s = simultaneous_svd(f, y);
      const Index m = std::min(f.rows(), f.cols());
      Matrix fd = Matrix::Zero(f.rows(), f.cols());
      Matrix yd = Matrix::Zero(f.rows(), f.cols());
      for (Index i = 0; i < m; ++i) {
        fd(i, i) = s.f_diag(i);
        yd(i, i) = static_cast<double>(s.y_diag(i));
      }
      CHECK((s.left_basis * fd * s.right_basis.adjoint() - f).norm() <= 1e-8);
      CHECK((s.left_basis * yd * s.right_basis.adjoint() - y).norm() <= 1e-8);
    }
  }
}

TEST_CASE("submajorization") {
  const std::vector<double> a{1, 0}, b{2, 0}, c{2, 0}, d{1, 1};
  CHECK(submajorization_holds(a, a, 1e-12));
  CHECK(submajorization_holds(a, b, 1e-12));
  CHECK_FALSE(submajorization_holds(c, d, 1e-12));
  CHECK_THROWS_AS(submajorization_holds(a, std::vector<double>{1}, 1e-12),
                  DimensionError);
}

TEST_CASE("Lidskii-Mirsky-Wielandt inequality on random pairs") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 8);
    const Matrix f = random_matrix(n, n, rng);
    const Matrix g = random_matrix(n, n, rng);
    const auto sf = singular_values(f);
    const auto sg = singular_values(g);
    std::vector<double> gaps(sf.size());
    for (std::size_t i = 0; i < sf.size(); ++i) gaps[i] = std::abs(sf[i] - sg[i]);
    CHECK(submajorization_holds(gaps, singular_values(f - g), 1e-9));
  }
}
