#include "ghalab/fd_eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "ghalab/errors.hpp"
#include "ghalab/stencil.hpp"

namespace ghalab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat banded_hamiltonian(const Eigen::VectorXd& V, double kin, int accuracy, FdBoundary boundary) {
  const int n = static_cast<int>(V.size());
  const auto st = central_stencil(accuracy);
  const int r = st.radius;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * (2 * r + 2));
  // sample j sits at index j+1 of the wall lattice: walls at lattice 0 and n+1
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, V(i));
    for (int k = -r; k <= r; ++k) {
      const double w = -kin * st.second[k + r];
      int j = i + k;
      if (j >= 0 && j < n) {
        trip.emplace_back(i, j, w);
        continue;
      }
      if (boundary == FdBoundary::Zero) continue;
      // lattice index of the ghost, mirrored through the nearer wall
      const int lat = j + 1;
      const int mirror = lat <= 0 ? -lat : 2 * (n + 1) - lat;
      if (mirror == 0 || mirror == n + 1) continue;
      trip.emplace_back(i, mirror - 1, -w);
    }
  }
  SpMat H(n, n);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

double rayleigh(const SpMat& H, const Eigen::VectorXd& v) { return v.dot(H * v) / v.squaredNorm(); }

}  // namespace

FdEigenResult fd_lowest_states(const std::function<double(double)>& V, double mass, double hbar,
                               double x_min, double x_max, int n_points, int count, FdBoundary boundary,
                               int accuracy) {
  if (n_points < 16 || count < 1 || count > n_points / 4 || !(x_max > x_min))
    throw ArgumentError("fd_lowest_states: bad grid or level count");
  FdEigenResult out;
  out.h = (x_max - x_min) / (n_points + 1);
  out.x = Eigen::VectorXd::LinSpaced(n_points, x_min + out.h, x_max - out.h);
  Eigen::VectorXd pot(n_points);
  for (int i = 0; i < n_points; ++i) pot(i) = V(out.x(i));
  const double kin = hbar * hbar / (2.0 * mass * out.h * out.h);

  // coarse locations from the second-order tridiagonal operator
  Eigen::VectorXd diag = pot.array() + 2.0 * kin;
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n_points - 1, -kin);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd coarse = tri.eigenvalues();

  const SpMat H = banded_hamiltonian(pot, kin, accuracy, boundary);
  SpMat I(n_points, n_points);
  I.setIdentity();

  out.energies.resize(count);
  out.states.resize(n_points, count);
  for (int lev = 0; lev < count; ++lev) {
    double sigma = coarse(lev);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n_points);
    Eigen::SparseLU<SpMat> lu;
    // shifted inverse iteration, then Rayleigh-quotient refinement
    for (int it = 0; it < 12; ++it) {
      const SpMat A = H - sigma * I;
      lu.compute(A);
      if (lu.info() != Eigen::Success) {
        sigma *= 1.0 + 1e-13;
        continue;
      }
      Eigen::VectorXd w = lu.solve(v);
      v = w.normalized();
      const double next = rayleigh(H, v);
      if (it >= 3) {
        const bool done = std::abs(next - sigma) <= 1e-14 * std::max(1.0, std::abs(next));
        sigma = next;
        if (done) break;
      }
    }
    out.energies(lev) = rayleigh(H, v);
    v /= std::sqrt(out.h * v.squaredNorm());
    out.states.col(lev) = v;
  }
  return out;
}

}  // namespace ghalab
