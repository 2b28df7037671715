#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

#include "ledspdc/polarization.hpp"

namespace testsupport {

using ledspdc::Complex;
using ledspdc::Matrix4c;

template <int N>
Eigen::Matrix<Complex, N, N> random_hermitian(std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::Matrix<Complex, N, N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = Complex(g(gen), g(gen));
  return (a + a.adjoint()) / 2.0;
}

/// Ginibre-distributed mixed state G G^dagger / tr, full rank almost surely.
inline ledspdc::TwoQubitState random_state(std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix4c a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(gen), g(gen));
  const Matrix4c rho = a * a.adjoint();
  return ledspdc::TwoQubitState::from_numerical(rho / rho.trace().real());
}

/// Random pure state.
inline ledspdc::TwoQubitState random_pure_state(std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  ledspdc::Ket4 v;
  for (int i = 0; i < 4; ++i) v(i) = Complex(g(gen), g(gen));
  return ledspdc::pure_state(v);
}

/// Haar-random single-qubit unitary via QR of a complex Gaussian matrix.
inline Eigen::Matrix2cd random_unitary(std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix2cd a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(gen), g(gen));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 2; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline Matrix4c kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Concurrence through the non-Hermitian product rho rho~ and a general complex eigensolver.
inline double concurrence_nonhermitian(const Matrix4c& rho) {
  Matrix4c yy = Matrix4c::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix4c prod = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix4c> es(prod);
  std::array<double, 4> l;
  for (int k = 0; k < 4; ++k) l[k] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace testsupport
