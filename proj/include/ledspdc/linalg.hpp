#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>

#include "ledspdc/errors.hpp"

namespace ledspdc {

template <typename Scalar, int N>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, N, N>;

template <typename Scalar, int N>
struct HermitianEigen {
  Eigen::Matrix<Scalar, N, 1> values;  ///< descending
  CMatrix<Scalar, N> vectors;          ///< column k belongs to values(k)
};

/// Largest |A - A^dagger| entry.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Cyclic Jacobi diagonalization of a small complex Hermitian matrix.
///
/// Each (p, q) pivot is first made real by a diagonal phase, then zeroed by a
/// real plane rotation. Sweeps continue until the off-diagonal Frobenius norm
/// drops below 1e-14 relative to ||A||_F (absolute 1e-14 for ||A||_F <= 1).
template <typename Scalar, int N>
HermitianEigen<Scalar, N> eig_hermitian(const CMatrix<Scalar, N>& input) {
  using Complex = std::complex<Scalar>;
  const Scalar norm = input.norm();
  if (!(hermiticity_defect(input) <= Scalar(1e-10) * std::max(Scalar(1), norm))) {
    throw DomainError("eig_hermitian: matrix is not Hermitian within 1e-10");
  }
  CMatrix<Scalar, N> a = (input + input.adjoint()) / Scalar(2);
  CMatrix<Scalar, N> v = CMatrix<Scalar, N>::Identity();
  const Scalar tol = Scalar(1e-14) * std::max(Scalar(1), norm);

  auto off_norm = [&a] {
    Scalar s = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > tol; ++sweep) {
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const Scalar g = std::abs(a(p, q));
        if (g == Scalar(0)) continue;
        const Complex phase = a(p, q) / g;
        const Scalar app = a(p, p).real();
        const Scalar aqq = a(q, q).real();
        const Scalar theta = (aqq - app) / (Scalar(2) * g);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        // U = diag(1, conj(phase)) in the (p, q) plane, followed by [[c, s], [-s, c]].
        CMatrix<Scalar, N> u = CMatrix<Scalar, N>::Identity();
        u(p, p) = c;
        u(p, q) = s;
        u(q, p) = -s * std::conj(phase);
        u(q, q) = c * std::conj(phase);
        a = u.adjoint() * a * u;
        v = v * u;
      }
    }
  }
  if (off_norm() > Scalar(1e3) * tol) {
    throw DomainError("eig_hermitian: Jacobi sweeps did not converge");
  }

  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&a](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  HermitianEigen<Scalar, N> out;
  for (int k = 0; k < N; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Principal square root of a PSD Hermitian matrix; eigenvalues below zero are clamped.
template <typename Scalar, int N>
CMatrix<Scalar, N> sqrt_psd(const CMatrix<Scalar, N>& a) {
  const auto eig = eig_hermitian<Scalar, N>(a);
  const Eigen::Matrix<Scalar, N, 1> roots = eig.values.cwiseMax(Scalar(0)).cwiseSqrt();
  return eig.vectors * roots.template cast<std::complex<Scalar>>().asDiagonal() * eig.vectors.adjoint();
}

/// Physical projection: negative eigenvalues set to zero, trace renormalized.
template <typename Scalar, int N>
CMatrix<Scalar, N> project_to_physical(const CMatrix<Scalar, N>& a) {
  const auto eig = eig_hermitian<Scalar, N>(a);
  Eigen::Matrix<Scalar, N, 1> clamped = eig.values.cwiseMax(Scalar(0));
  const Scalar total = clamped.sum();
  if (!(total > Scalar(0))) throw DomainError("project_to_physical: no positive eigenvalues");
  clamped /= total;
  return eig.vectors * clamped.template cast<std::complex<Scalar>>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace ledspdc
