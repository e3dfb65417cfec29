#pragma once

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "ghalab/model.hpp"
#include "ghalab/report.hpp"

namespace ghalab {

// Dense operator on a truncated Fock basis.  Identities of the untruncated
// operator are trusted on the first interior_dim basis vectors only.
template <typename Scalar = std::complex<double>>
struct TruncatedOperator {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix matrix;
  Eigen::Index interior_dim = 0;
  Eigen::Index size() const { return matrix.rows(); }
};

// Ladder weight: A⁻ψₙ = √k(n) ψₙ₋₁.  Well n²−1, Morse n(2p−n).
double ladder_k(const SystemParams& s, double n);

// Quadratic spectrum Eₙ = a n² + b n + c.
double quantum_a(const SystemParams& s);
double quantum_b(const SystemParams& s);

// Energy functions evaluated at an energy value.
double quantum_lambda(const SystemParams& s, double E);  // E_{n+1} − E_n as a function of E_n
double quantum_delta(const SystemParams& s, double E);   // λ(E) − 2a
double quantum_gamma1(const SystemParams& s, double E);  // A⁺A⁻ eigenvalue
double quantum_gamma2(const SystemParams& s, double E);  // A⁻A⁺ eigenvalue

// Labels of the N basis vectors; Morse requires N = bound_state_count.
std::vector<int> fock_labels(const SystemParams& s, int N);

template <typename Scalar = std::complex<double>>
struct FockOperators {
  TruncatedOperator<Scalar> H, raise, lower, number;
  std::vector<int> labels;
};

template <typename Scalar = std::complex<double>>
struct StructureOperators {
  TruncatedOperator<Scalar> lambda, gamma1, gamma2, delta;
};

template <typename Scalar = std::complex<double>>
TruncatedOperator<Scalar> diagonal_operator(const SystemParams& s, const std::vector<int>& labels,
                                            double (*f)(const SystemParams&, double)) {
  const Eigen::Index N = static_cast<Eigen::Index>(labels.size());
  TruncatedOperator<Scalar> op{TruncatedOperator<Scalar>::Matrix::Zero(N, N), N};
  for (Eigen::Index i = 0; i < N; ++i) op.matrix(i, i) = Scalar(f(s, spectrum_1d(s, labels[i])));
  return op;
}

template <typename Scalar = std::complex<double>>
FockOperators<Scalar> build_operators(const SystemParams& s, int N) {
  using Matrix = typename TruncatedOperator<Scalar>::Matrix;
  FockOperators<Scalar> ops;
  ops.labels = fock_labels(s, N);
  Matrix H = Matrix::Zero(N, N), lower = Matrix::Zero(N, N), num = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    const int n = ops.labels[i];
    H(i, i) = Scalar(spectrum_1d(s, n));
    num(i, i) = Scalar(n);
    if (i > 0) lower(i - 1, i) = Scalar(std::sqrt(ladder_k(s, n)));
  }
  // the well spectrum continues past the truncation: the last row of A⁺ is missing
  const Eigen::Index inner = s.is_well() ? N - 1 : N;
  ops.H = {H, N};
  ops.lower = {lower, inner};
  ops.raise = {lower.adjoint(), inner};
  ops.number = {num, N};
  return ops;
}

template <typename Scalar = std::complex<double>>
StructureOperators<Scalar> structure_functions(const SystemParams& s, int N) {
  const auto labels = fock_labels(s, N);
  return {diagonal_operator<Scalar>(s, labels, quantum_lambda), diagonal_operator<Scalar>(s, labels, quantum_gamma1),
          diagonal_operator<Scalar>(s, labels, quantum_gamma2), diagonal_operator<Scalar>(s, labels, quantum_delta)};
}

// Largest entry of M restricted to columns [0, cols), all rows.
template <typename Derived>
double interior_max(const Eigen::MatrixBase<Derived>& M, Eigen::Index cols) {
  if (cols <= 0) return 0.0;
  return M.leftCols(cols).cwiseAbs().maxCoeff();
}

template <typename Scalar = std::complex<double>>
struct TwoDimOperators {
  TruncatedOperator<Scalar> H2, S, Iplus, Iminus;
  int N = 0;
  std::vector<int> labels;
  // basis index of |labels[ix], labels[iy]⟩
  Eigen::Index index(int ix, int iy) const { return static_cast<Eigen::Index>(ix) * N + iy; }
};

// H₂ = Hx⊗1 + 1⊗Hy, S = Hx⊗1 − 1⊗Hy, I₊ = (A⁺)ᵏ⊗(A⁻)ˡ, I₋ = (A⁻)ᵏ⊗(A⁺)ˡ.
template <typename Scalar = std::complex<double>>
TwoDimOperators<Scalar> build_2d(const SystemParams& s, int N, int k, int l) {
  using Matrix = typename TruncatedOperator<Scalar>::Matrix;
  if (k < 1 || l < 1) throw ArgumentError("ladder powers must be >= 1");
  if (k >= N || l >= N)
    throw DimensionError("ladder power exceeds the truncation margin (need k, l < N = " + std::to_string(N) + ")");
  const auto ops = build_operators<Scalar>(s, N);
  const Matrix id = Matrix::Identity(N, N);
  Matrix up = Matrix::Identity(N, N), down = Matrix::Identity(N, N);
  Matrix upl = Matrix::Identity(N, N), downk = Matrix::Identity(N, N);
  for (int i = 0; i < k; ++i) up = up * ops.raise.matrix;
  for (int i = 0; i < l; ++i) down = down * ops.lower.matrix;
  for (int i = 0; i < l; ++i) upl = upl * ops.raise.matrix;
  for (int i = 0; i < k; ++i) downk = downk * ops.lower.matrix;

  TwoDimOperators<Scalar> out;
  out.N = N;
  out.labels = ops.labels;
  const Eigen::Index full = static_cast<Eigen::Index>(N) * N;
  const Matrix Hx = Eigen::kroneckerProduct(ops.H.matrix, id), Hy = Eigen::kroneckerProduct(id, ops.H.matrix);
  out.H2 = {Hx + Hy, full};
  out.S = {Hx - Hy, full};
  // x-raising k times stays inside the truncation for the first N−k x-labels;
  // with the x-major ordering that is a prefix of the basis
  const Eigen::Index inner = s.is_well() ? static_cast<Eigen::Index>(N - k) * N : full;
  out.Iplus = {Eigen::kroneckerProduct(up, down), inner};
  out.Iminus = {Eigen::kroneckerProduct(downk, upl), full};
  return out;
}

template <typename Scalar = std::complex<double>>
struct PermutationOperators {
  TruncatedOperator<Scalar> Iplus, Iminus, I3;
  int N = 0;
  std::vector<int> labels;
};

// Bare form: I₊ = Σ |i+l, i⟩⟨i, i+l| maps nx < ny onto the transpose,
// I₋ = I₊†, I₃ = ½ sign(nx − ny) on the diagonal.
template <typename Scalar = std::complex<double>>
PermutationOperators<Scalar> permutation_operators(const SystemParams& s, int N) {
  using Matrix = typename TruncatedOperator<Scalar>::Matrix;
  PermutationOperators<Scalar> out;
  out.N = N;
  out.labels = fock_labels(s, N);
  const Eigen::Index full = static_cast<Eigen::Index>(N) * N;
  Matrix P = Matrix::Zero(full, full), D = Matrix::Zero(full, full);
  for (int ix = 0; ix < N; ++ix)
    for (int iy = 0; iy < N; ++iy) {
      const Eigen::Index src = static_cast<Eigen::Index>(ix) * N + iy;
      if (ix < iy) P(static_cast<Eigen::Index>(iy) * N + ix, src) = Scalar(1);
      D(src, src) = Scalar(0.5 * ((ix > iy) - (ix < iy)));
    }
  out.Iplus = {P, full};
  out.Iminus = {P.adjoint(), full};
  out.I3 = {D, full};
  return out;
}

// Weighted form Σ Π_{j=i+1}^{i+l} k(j)⁻¹ · I₊^(l,l) |i, i+l⟩⟨i, i+l|.
template <typename Scalar = std::complex<double>>
typename TruncatedOperator<Scalar>::Matrix weighted_permutation_plus(const SystemParams& s, int N) {
  using Matrix = typename TruncatedOperator<Scalar>::Matrix;
  const auto labels = fock_labels(s, N);
  const Eigen::Index full = static_cast<Eigen::Index>(N) * N;
  Matrix out = Matrix::Zero(full, full);
  for (int l = 1; l < N; ++l) {
    const auto two = build_2d<Scalar>(s, N, l, l);
    for (int i = 0; i + l < N; ++i) {
      double w = 1.0;
      for (int j = i + 1; j <= i + l; ++j) w *= ladder_k(s, labels[j]);
      const Eigen::Index src = static_cast<Eigen::Index>(i) * N + i + l;
      out.col(src) += two.Iplus.matrix.col(src) / Scalar(w);
    }
  }
  return out;
}

ResidualReport verify_gha_quantum(const SystemParams& s, int N);

// Commutator signature σ with [A⁺, A⁻] = −2σA₀ on the interior (σ = +1 is the
// displayed relation).
double su11_commutator_sign(const SystemParams& s, int N);
ResidualReport su11_check(const SystemParams& s, int N);

struct ComipmReport {
  ResidualReport checks;
  std::vector<LabelPair> vanishing_predicted;  // eigenfactor zero (interior states)
  std::vector<LabelPair> vanishing_observed;   // commutator zero while I₊|s⟩ ≠ 0
  std::vector<LabelPair> annihilated;          // I₊|s⟩ = 0
};

// Eigenfactor of [H₂, I₊^(k,l)] at |nx, ny⟩.
double comipm_factor(const SystemParams& s, int k, int l, int nx, int ny);
ComipmReport comipm_check(const SystemParams& s, int N, int k, int l);

ResidualReport permutation_check(const SystemParams& s, int N);

}  // namespace ghalab
