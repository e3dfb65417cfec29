#pragma once

#include <Eigen/Core>
#include <functional>

namespace ghalab {

// How the sample vector continues past the two end points (which sit one
// spacing outside the first/last sample and carry ψ = 0).
enum class FdBoundary {
  Zero,          // ψ ≡ 0 beyond the ends (decayed bound states)
  OddReflection  // hard wall: ψ continues antisymmetrically through the end
};

struct FdEigenResult {
  Eigen::VectorXd x;
  double h = 0.0;
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd states;    // columns, normalized so that h·Σψ² = 1
};

// Lowest `count` eigenpairs of -ħ²/(2m) d²/dx² + V on n_points samples strictly
// inside (x_min, x_max).  A second-order tridiagonal solve locates the levels,
// then shifted inverse / Rayleigh-quotient iteration refines them on the
// `accuracy`-order banded operator.
FdEigenResult fd_lowest_states(const std::function<double(double)>& V, double mass, double hbar,
                               double x_min, double x_max, int n_points, int count,
                               FdBoundary boundary = FdBoundary::Zero, int accuracy = 8);

}  // namespace ghalab
