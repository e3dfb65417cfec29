#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ghalab/model.hpp"
#include "ghalab/stencil.hpp"

namespace ghalab {

struct Grid1D {
  double x_min = 0.0;
  double h = 1.0;
  int n = 0;
  double x(int i) const { return x_min + i * h; }
  double x_max() const { return x(n - 1); }
  Eigen::ArrayXd points() const { return Eigen::ArrayXd::LinSpaced(n, x_min, x_max()); }
  static Grid1D span(double lo, double hi, int n);
};

// Square grid whose y samples are shifted by h/2 so that no sample lies on x = y.
struct Grid2D {
  Grid1D xs, ys;
  double h() const { return xs.h; }
  int n() const { return xs.n; }
  static Grid2D staggered(double lo, double hi, int n);
};

// Samples on a 2D grid, values(i, j) at (xs.x(i), ys.x(j)).
template <typename Scalar = double>
struct WaveField {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Grid2D grid;
  Array values;

  static WaveField zero(const Grid2D& g) { return {g, Array::Zero(g.n(), g.n())}; }
  double norm() const;
};

// Trapezoid weights (½ at both ends) on n samples.
Eigen::ArrayXd trapezoid_weights(int n);

template <typename Scalar>
double WaveField<Scalar>::norm() const {
  const Eigen::ArrayXd w = trapezoid_weights(grid.n());
  const Eigen::ArrayXXd a2 = values.abs2().template cast<double>();
  return std::sqrt(grid.h() * grid.h() * (w.matrix().transpose() * a2.matrix() * w.matrix()).value());
}

template <typename Scalar>
Scalar inner(const WaveField<Scalar>& a, const WaveField<Scalar>& b) {
  const Eigen::ArrayXd w = trapezoid_weights(a.grid.n());
  const auto prod = (a.values.conjugate() * b.values).matrix();
  return a.grid.h() * a.grid.h() * (w.matrix().transpose().template cast<Scalar>() * prod *
                                     w.matrix().template cast<Scalar>())
                                        .value();
}

using Field = WaveField<double>;

// ---------------------------------------------------------------- eigenfunctions

// Normalized bound eigenfunction of the 1D Morse Hamiltonian at the given
// points (associated-Laguerre form in ξ = ν e^{−βx}); positive at large x.
Eigen::ArrayXd morse_eigenfunction_1d(const SystemParams& s, int n, const Eigen::ArrayXd& x);

// Interval on which every eigenfunction with label ≤ max_label is below
// 1e−12 at both ends; starts from [−2/β, 12/β] and widens.
std::pair<double, double> morse_domain(const SystemParams& s, int max_label, double threshold = 1e-12);

struct GateRow {
  int n;
  double exact_energy, fd_energy, relative_error, overlap;
  int fd_nodes;
};

struct GateReport {
  std::vector<GateRow> rows;
  double x_min, x_max;
  bool pass() const;  // relative error < 1e−6 and overlap > 1 − 1e−8 on every row
};

// Compares the analytic eigenfunctions with a finite-difference eigensolver.
GateReport morse_eigenfunction_gate(const SystemParams& s, int n_points = 4096);

// (Ψˢ, Ψᴬ) = (ψₙ(x)ψₘ(y) ± ψₘ(x)ψₙ(y))/√2; for n = m, Ψˢ = ψₙψₙ and Ψᴬ = 0.
std::pair<Field, Field> sym_antisym_state(const SystemParams& s, int n, int m, const Grid2D& g);
// ψₙ(x)ψₘ(y)
Field product_state(const SystemParams& s, int n, int m, const Grid2D& g);

// Estimated field value on the diagonal relative to its largest sample.
double diagonal_magnitude(const Field& f);

// ---------------------------------------------------------------- operators

// Finite-difference operators of the 2D Morse system and its partner on a
// fixed grid.  chain_factor is the weight in ∂_{x∓} = chain_factor·(∂x ∓ ∂y);
// ½ matches x± = x ± y, the value 1 is kept only to show that it fails.
class SusyOperators {
 public:
  SusyOperators(const SystemParams& s, const Grid2D& g, int accuracy = 8, double chain_factor = 0.5);

  const SystemParams& params() const { return s_; }
  const Grid2D& grid() const { return g_; }
  // ħ²β²/(2m) = ħ²ε²/4
  double c() const;

  Field Hx(const Field& f) const;
  Field Hy(const Field& f) const;
  Field H(const Field& f) const;
  Field barrier(const Field& f) const;
  Field Htilde(const Field& f) const;
  Field D(int sign, const Field& f) const;
  Field Q(int sign, const Field& f) const;

 private:
  Eigen::ArrayXXd dx(const Eigen::ArrayXXd& f, const std::vector<double>& w) const;
  Eigen::ArrayXXd dy(const Eigen::ArrayXXd& f, const std::vector<double>& w) const;
  void require_vanishing_diagonal(const Field& f, const char* op) const;

  SystemParams s_;
  Grid2D g_;
  CentralStencil st_;
  double chain_;
  Eigen::ArrayXd vx_, vy_;
  Eigen::ArrayXXd coth_, barrier_;
};

inline constexpr double kDiagonalTolerance = 0.1;

Field apply_H(const Field& f, const SystemParams& s);
Field apply_Htilde(const Field& f, const SystemParams& s);
Field apply_D(int sign, const Field& f, const SystemParams& s);
Field supercharge_apply(int sign, const Field& f, const SystemParams& s);

// ‖(H̃Q⁺ − Q⁺H)Ψᴬₙₘ‖ / ‖Q⁺Ψᴬₙₘ‖
double intertwining_residual(const SystemParams& s, int n, int m, const Grid2D& g, int accuracy = 8);

struct RefinementStudy {
  std::vector<int> points;
  std::vector<double> residuals;
  double order() const;  // log2 ratio between the first two levels, per halving of h
  double observed_order(std::size_t i) const;
};

// Grid spanning every label in use, sized n×n.
Grid2D morse_grid_2d(const SystemParams& s, int max_label, int n);

// ---------------------------------------------------------------- R and the theorem

// (E_{m+1} − Eₙ)(E_{m−1} − Eₙ) with the closed-form spectrum extended formally.
double r_eigenvalue(const SystemParams& s, int n, int m);
// c·((m−n)² − 1)((2p−m−n)² − 1): the alternative prefactor reading.
double r_single_prefactor(const SystemParams& s, int n, int m);

struct RReport {
  double expected = 0.0;                // r_eigenvalue
  double composition_eigenvalue = 0.0;  // ⟨Ψᴬ, Q⁻Q⁺Ψᴬ⟩/⟨Ψᴬ, Ψᴬ⟩ (n ≠ m)
  double composition_residual = 0.0;    // ‖Q⁻Q⁺Ψᴬ − rΨᴬ‖ / max(|r|, c²)
  double rhs_eigenvalue = 0.0;          // ((Hx−Hy)² + 2cH + c²) on ψₙψₘ
  double rhs_residual = 0.0;
  double literal_rhs_eigenvalue = 0.0;  // ((Hx−Hy)² + 2H + 1), exact spectrum
  double q_plus_norm = 0.0;             // ‖Q⁺Ψᴬ‖
  bool has_composition = false;
};

RReport verify_R_on_grid(const SystemParams& s, int n, int m, const Grid2D& g, int accuracy = 8);

struct ResolvedPair {
  LabelPair first, second;
  double r_first, r_second;
  bool separated;
};

struct TheoremReport {
  std::vector<ResolvedPair> arithmetical;
  int equal_energy_pairs = 0;          // ordered pairs of distinct label pairs with equal energy
  std::array<int, 4> case_hits{};      // m₁=m₂, m₁=n₂, m₁+m₂=2p, m₁+n₂=2p
  int trivial_case_hits = 0;           // of those, identity or transposition
  double factorization_residual = 0.0; // r₁ − r₂ against 4c²(m₂−m₁)(n₂−m₁)(2p−m₁−m₂)(2p−m₁−n₂)
  bool resolved() const;
};

TheoremReport degeneracy_resolution_check(const SystemParams& s, int n_max);

// ---------------------------------------------------------------- position-space ladders

enum class LadderDirection { Lower, Raise };

struct Field1D {
  Grid1D grid;
  Eigen::ArrayXd values;
  double norm() const;
};

// Infinite-well eigenfunction √(2/L) sin(nπ(x/L + ½)) on a grid whose end samples sit on the walls.
Field1D well_eigenfunction_1d(const SystemParams& s, int n, const Grid1D& g);
Grid1D well_grid(const SystemParams& s, double h);
Grid1D morse_grid_1d(const SystemParams& s, int max_label, double h);

// Differential realization of A± acting on ψₙ.
Field1D position_ladder(const SystemParams& s, int n, const Grid1D& g, LadderDirection dir, int accuracy = 8);

struct LadderCheck {
  double residual;     // ‖Aψₙ − target‖/‖target‖, or ‖Aψₙ‖ when the target is zero
  double overlap;      // normalized ⟨Aψₙ, target⟩ (1 when both vanish)
  double applied_norm;
  double target_norm;
};

LadderCheck quantum_ladder_position_check(const SystemParams& s, int n, const Grid1D& g, LadderDirection dir,
                                          int accuracy = 8);

}  // namespace ghalab
