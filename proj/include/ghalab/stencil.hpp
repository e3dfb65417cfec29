#pragma once

#include <Eigen/Core>
#include <vector>

namespace ghalab {

// Centered finite-difference weights on unit spacing, indices -radius..radius.
struct CentralStencil {
  int radius = 1;
  std::vector<double> first;   // d/dx
  std::vector<double> second;  // d²/dx²
};

// accuracy is the (even) truncation order: 2, 4, 6 or 8.
CentralStencil central_stencil(int accuracy);

// Fornberg's recursion: weights for derivatives 0..max_order at x0 on arbitrary nodes.
// Result(k, j) is the weight of node j for the k-th derivative.
Eigen::MatrixXd fornberg_weights(double x0, const std::vector<double>& nodes, int max_order);

enum class StencilBoundary {
  Zero,      // samples beyond both ends are zero
  OddAboutEnds  // the end samples sit on hard walls; the field continues antisymmetrically
};

// Derivative of a 1D sample vector: scale · Σₖ w[k+r] f[i+k].
Eigen::ArrayXd apply_stencil(const Eigen::ArrayXd& f, const std::vector<double>& w, double scale,
                             StencilBoundary boundary = StencilBoundary::Zero);

// d^order f/dx^order on uniform spacing h: central weights inside, shifted
// (one-sided) windows of the same width within radius of either end, so no
// values beyond the samples are assumed.
Eigen::ArrayXd differentiate(const Eigen::ArrayXd& f, double h, int order, int accuracy = 8);

}  // namespace ghalab
