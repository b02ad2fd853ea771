#include <gtest/gtest.h>

#include "soflqr/errors.hpp"
#include "soflqr/examples.hpp"
#include "soflqr/linalg.hpp"
#include "support/random_instances.hpp"

namespace soflqr {
namespace {

TEST(SpectralAbscissa, NegativeIdentity) {
  EXPECT_DOUBLE_EQ(spectral_abscissa(-Eigen::MatrixXd::Identity(3, 3)), -1.0);
}

TEST(SpectralAbscissa, RotationIsMarginal) {
  Eigen::Matrix2d M;
  M << 0, 1, -1, 0;
  EXPECT_NEAR(spectral_abscissa(M), 0.0, 1e-15);
  EXPECT_FALSE(is_hurwitz(spectral_abscissa(M)));
}

TEST(SpectralAbscissa, AircraftOpenLoop) {
  // Largest real part among the roots of the characteristic polynomial,
  // computed with exact rational coefficients.
  const auto ex = builtin_example("example1");
  EXPECT_NEAR(spectral_abscissa(ex.problem.plant().A), -0.010475941988581737, 1e-13);
}

TEST(SpectralAbscissa, HurwitzToleranceIsStrict) {
  EXPECT_FALSE(is_hurwitz(-0.5e-10));
  EXPECT_TRUE(is_hurwitz(-2e-10));
}

TEST(Vec, ColumnMajor) {
  Eigen::Matrix2d M;
  M << 1, 2, 3, 4;
  const Eigen::VectorXd v = vec(M);
  EXPECT_EQ(v, Eigen::Vector4d(1, 3, 2, 4));
}

TEST(Vec, UnvecInvertsVec) {
  testing::Rng rng(11);
  const Eigen::MatrixXd M = rng.gaussian(2, 3);
  EXPECT_EQ(unvec(vec(M), 2, 3), M);
  EXPECT_THROW(unvec(vec(M), 4, 2), DimensionError);
}

TEST(Vec, SingleEntry) {
  // J^{21}: one in row 2, column 1.
  EXPECT_EQ(vec(single_entry(2, 2, 1, 0)), Eigen::Vector4d(0, 1, 0, 0));
}

TEST(Kron, IdentityGivesBlockDiagonal) {
  testing::Rng rng(12);
  const Eigen::MatrixXd M = rng.gaussian(2, 3);
  const Eigen::MatrixXd K = kron(Eigen::MatrixXd::Identity(2, 2), M);
  ASSERT_EQ(K.rows(), 4);
  ASSERT_EQ(K.cols(), 6);
  EXPECT_EQ(K.topLeftCorner(2, 3), M);
  EXPECT_EQ(K.bottomRightCorner(2, 3), M);
  EXPECT_TRUE(K.topRightCorner(2, 3).isZero());
  EXPECT_TRUE(K.bottomLeftCorner(2, 3).isZero());
}

TEST(Kron, DecentralizedRow) {
  const Eigen::MatrixXd K = kron(Eigen::RowVector2d(0, 1), Eigen::RowVector2d(1, 0));
  EXPECT_EQ(K, Eigen::RowVector4d(0, 0, 1, 0));
}

TEST(Kron, VecIdentity) {
  testing::Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd A = rng.gaussian(2, 2);
    const Eigen::MatrixXd X = rng.gaussian(2, 2);
    const Eigen::MatrixXd B = rng.gaussian(2, 2);
    const Eigen::VectorXd lhs = vec(A * X * B);
    const Eigen::VectorXd rhs = kron(B.transpose(), A) * vec(X);
    EXPECT_LE((lhs - rhs).norm(), 1e-13 * (1.0 + lhs.norm()));
  }
}

TEST(Symmetrize, ExactlySymmetric) {
  testing::Rng rng(14);
  const Eigen::MatrixXd S = symmetrize(rng.gaussian(5, 5));
  EXPECT_EQ(S, S.transpose());
}

}  // namespace
}  // namespace soflqr
