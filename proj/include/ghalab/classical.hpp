#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ghalab/model.hpp"
#include "ghalab/report.hpp"

namespace ghalab {

using cplx = std::complex<double>;

struct PhaseState1D {
  double x = 0.0;
  double p = 0.0;
  double t = 0.0;
};

struct PhaseState2D {
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  double t = 0.0;
};

// Flat phase-space point (q_1..q_d, p_1..p_d).
using PhasePoint = Eigen::VectorXd;
using PhaseFunction = std::function<cplx(const PhasePoint&)>;

PhasePoint to_point(const PhaseState1D& s);
PhasePoint to_point(const PhaseState2D& s);

// Open interval a position coordinate must stay in for the stencil.
struct CoordinateBounds {
  double lo, hi;
};
std::vector<CoordinateBounds> stencil_bounds(const SystemParams& s);

// Central-difference Σᵢ (∂f/∂qᵢ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂qᵢ); {q, p} = 1.
cplx poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& z, double h,
                     std::span<const CoordinateBounds> q_bounds = {});

// The same bracket with arguments swapped so that evolution_bracket(H, f) = df/dt.
// The algebra relations below ({H, A±} = ±iλA± etc.) are stated in this orientation.
cplx evolution_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& z, double h,
                       std::span<const CoordinateBounds> q_bounds = {});

// Phase functions of one axis of a dim-dimensional phase space.
PhaseFunction hamiltonian_function(const SystemParams& s, int axis = 0, int dim = 1);
// sign = +1 raising, −1 lowering; uses √H (well) or √(−H) (Morse) as phase functions
PhaseFunction ladder_function(const SystemParams& s, int sign, int axis = 0, int dim = 1);
PhaseFunction lambda_function(const SystemParams& s, int axis = 0, int dim = 1);

double energy(const SystemParams& s, const PhaseState1D& st);

// Energy functions of the classical algebra.
class ClassicalStructure {
 public:
  explicit ClassicalStructure(SystemParams s) : s_(s) {}
  double lambda(double E) const;
  double mu(double E) const;
  double gamma(double E) const;
  double a() const;

 private:
  SystemParams s_;
};

struct LadderValue {
  cplx value;  // raising function; the lowering one is its conjugate
  double energy;
  cplx lowering() const { return std::conj(value); }
};

LadderValue ladder_eval(const SystemParams& s, const PhaseState1D& st, double E);

// Phase θ₀ that starts the well at x = 0 moving right and the Morse particle
// at its inner turning point.
double default_phase(const SystemParams& s);

// Bounce motion written as x = (L/π)(π/2 − |φ|), φ = θ₀ + λt folded into [−π, π).
PhaseState1D trajectory_well_1d(const SystemParams& s, double E, double t, double theta0);
PhaseState1D trajectory_well_1d(const SystemParams& s, double E, double t);
PhaseState1D trajectory_morse_1d(const SystemParams& s, double E, double theta0, double t);
PhaseState1D trajectory_1d(const SystemParams& s, double E, double theta0, double t);

// Turning points (inner, outer) of the Morse motion at energy E.
std::pair<double, double> morse_turning_points(const SystemParams& s, double E);

PhaseState2D trajectory_2d(const SystemParams& sx, const SystemParams& sy, double Ex, double Ey,
                           const Eigen::Vector2d& phases, double t);
// samples evenly spaced points on [0, t_end], both ends included
std::vector<PhaseState2D> sample_trajectory_2d(const SystemParams& sx, const SystemParams& sy, double Ex,
                                               double Ey, const Eigen::Vector2d& phases, double t_end,
                                               int samples);
// Time after which a commensurate 2D orbit first returns, or nullopt.
std::optional<double> closure_time(const SystemParams& sx, const SystemParams& sy, double Ex, double Ey,
                                   int n_max = 64);
// Largest componentwise difference of two phase states.
double phase_distance(const PhaseState2D& a, const PhaseState2D& b);

std::vector<PhaseState1D> random_on_shell_states(const SystemParams& s, double E, int count,
                                                 std::uint64_t seed, double wall_margin = 1e-3);

ResidualReport verify_gha_classical(const SystemParams& s, std::span<const PhaseState1D> samples,
                                    double h = 1e-4);

// max over Q± of |Q(t) − Q(0)|/|Q(0)| along the analytic trajectory, Q± = A± e^{∓iλt}
double q_constancy(const SystemParams& s, double E, double theta0, double T_total, int steps);
cplx q_plus_initial(const SystemParams& s, double E, double theta0);

// Position recovered from the ladder phase: sin(πx/L) = cos φ, cos(πx/L) = |sin φ|.
double invert_trajectory_well(const SystemParams& s, double E, double theta0, double t);

// I±^(k,l) = (A±_x)^k (A∓_y)^l on the 2D phase space (x, y, Px, Py).
PhaseFunction ladder_product_function(const SystemParams& sx, const SystemParams& sy, int k, int l, int sign);

struct ProductBracket {
  cplx lhs, rhs;
  double residual;
  bool within_tolerance;  // residual < 1e−5·(1+|rhs|)
};

ProductBracket product_bracket_check(const SystemParams& sx, const SystemParams& sy, int k, int l,
                                     const PhaseState2D& st, int sign = +1, double h = 1e-4);

// {{{H, F}, F}, F} with nested central differences.
cplx triple_bracket(const PhaseFunction& H, const PhaseFunction& F, const PhasePoint& z, double h,
                    std::span<const CoordinateBounds> q_bounds = {});
double triple_bracket_check(const SystemParams& sx, const SystemParams& sy, int k, int l,
                            const PhaseState2D& st, int sign = +1, double h = 1e-3);

}  // namespace ghalab
