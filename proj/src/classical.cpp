#include "ghalab/classical.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "ghalab/stencil.hpp"

namespace ghalab {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I1(0.0, 1.0);

double wrap_pi(double phi) {
  // fold into [−π, π)
  double w = std::fmod(phi + pi, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  return w - pi;
}

void check_on_shell(const SystemParams& s, const PhaseState1D& st, double E) {
  const double H = energy(s, st);
  const double off = std::abs(H - E);
  if (!(off <= 1e-10 * std::max(1.0, std::abs(E))))
    throw ConsistencyError("phase point is off the energy shell: |H - E| = " + std::to_string(off));
}

cplx ladder_value(const SystemParams& s, double x, double P, double H, int sign) {
  const double m = s.mass();
  const cplx kin = -static_cast<double>(sign) * I1 / std::sqrt(2.0 * m) * P;
  if (s.is_well()) {
    const double u = pi * x / s.length();
    return kin * std::cos(u) + std::sin(u) * std::sqrt(H);
  }
  const double e = std::exp(s.beta() * x), r = std::sqrt(-H);
  return kin * e + e * r - s.depth() / r;
}

std::vector<CoordinateBounds> bounds_2d(const SystemParams& sx, const SystemParams& sy) {
  return {stencil_bounds(sx)[0], stencil_bounds(sy)[0]};
}

}  // namespace

PhasePoint to_point(const PhaseState1D& s) {
  PhasePoint z(2);
  z << s.x, s.p;
  return z;
}

PhasePoint to_point(const PhaseState2D& s) {
  PhasePoint z(4);
  z << s.q, s.p;
  return z;
}

std::vector<CoordinateBounds> stencil_bounds(const SystemParams& s) {
  if (s.is_well()) return {{-0.5 * s.length(), 0.5 * s.length()}};
  const double inf = std::numeric_limits<double>::infinity();
  return {{-inf, inf}};
}

cplx poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& z, double h,
                     std::span<const CoordinateBounds> q_bounds) {
  if (!(h > 0.0)) throw ArgumentError("bracket step must be positive");
  const Eigen::Index d = z.size() / 2;
  // fourth-order central differences: truncation O(h⁴) keeps Morse brackets well inside 1e−5 at h = 1e−4
  static const CentralStencil st = central_stencil(4);
  const double reach = st.radius * h;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(q_bounds.size()) && i < d; ++i) {
    if (!(z(i) - reach > q_bounds[i].lo && z(i) + reach < q_bounds[i].hi))
      throw StencilError("bracket stencil at coordinate " + std::to_string(z(i)) + " leaves (" +
                         std::to_string(q_bounds[i].lo) + ", " + std::to_string(q_bounds[i].hi) + ")");
  }
  auto partial = [&](const PhaseFunction& fn, Eigen::Index i) {
    cplx acc = 0.0;
    for (int k = 1; k <= st.radius; ++k) {
      PhasePoint a = z, b = z;
      a(i) += k * h;
      b(i) -= k * h;
      acc += st.first[st.radius + k] * (fn(a) - fn(b));
    }
    return acc / h;
  };
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    acc += partial(f, i) * partial(g, i + d) - partial(f, i + d) * partial(g, i);
  return acc;
}

cplx evolution_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& z, double h,
                       std::span<const CoordinateBounds> q_bounds) {
  return poisson_bracket(g, f, z, h, q_bounds);
}

PhaseFunction hamiltonian_function(const SystemParams& s, int axis, int dim) {
  return [s, axis, dim](const PhasePoint& z) -> cplx {
    const double P = z(dim + axis);
    const double kin = P * P / (2.0 * s.mass());
    return s.is_well() ? kin : kin + s.potential(z(axis));
  };
}

PhaseFunction ladder_function(const SystemParams& s, int sign, int axis, int dim) {
  const auto H = hamiltonian_function(s, axis, dim);
  return [s, sign, axis, dim, H](const PhasePoint& z) {
    return ladder_value(s, z(axis), z(dim + axis), H(z).real(), sign);
  };
}

PhaseFunction lambda_function(const SystemParams& s, int axis, int dim) {
  const auto H = hamiltonian_function(s, axis, dim);
  const ClassicalStructure g(s);
  return [g, H](const PhasePoint& z) -> cplx { return g.lambda(H(z).real()); };
}

double energy(const SystemParams& s, const PhaseState1D& st) {
  const double kin = st.p * st.p / (2.0 * s.mass());
  return s.is_well() ? kin : kin + s.potential(st.x);
}

double ClassicalStructure::lambda(double E) const {
  return s_.is_well() ? s_.alpha() * std::sqrt(E) : s_.epsilon() * std::sqrt(-E);
}

double ClassicalStructure::mu(double E) const {
  if (s_.is_well()) return s_.alpha() * std::sqrt(E);
  // λ(E)·d(E − γ(E))/dE; positive, as {A⁺,A⁻} = −iμ requires
  const double V0 = s_.depth();
  return s_.epsilon() * V0 * V0 / (-E * std::sqrt(-E));
}

double ClassicalStructure::gamma(double E) const {
  if (s_.is_well()) return 0.0;
  const double V0 = s_.depth();
  return V0 + E + V0 * V0 / E;
}

double ClassicalStructure::a() const {
  if (s_.is_well()) return s_.alpha() * s_.alpha() / 4.0;
  return -s_.epsilon() * s_.epsilon() / 4.0;
}

LadderValue ladder_eval(const SystemParams& s, const PhaseState1D& st, double E) {
  check_regime(s, E);
  check_on_shell(s, st, E);
  return {ladder_value(s, st.x, st.p, E, +1), E};
}

double default_phase(const SystemParams& s) { return s.is_well() ? -pi / 2.0 : 0.0; }

PhaseState1D trajectory_well_1d(const SystemParams& s, double E, double t, double theta0) {
  check_regime(s, E);
  const double L = s.length();
  const double lam = ClassicalStructure(s).lambda(E);
  const double phi = wrap_pi(theta0 + lam * t);
  const double p0 = std::sqrt(2.0 * s.mass() * E);
  return {L / pi * (pi / 2.0 - std::abs(phi)), phi < 0.0 ? p0 : -p0, t};
}

PhaseState1D trajectory_well_1d(const SystemParams& s, double E, double t) {
  return trajectory_well_1d(s, E, t, -pi / 2.0);
}

PhaseState1D trajectory_morse_1d(const SystemParams& s, double E, double theta0, double t) {
  check_regime(s, E);
  const double b = s.beta(), V0 = s.depth(), m = s.mass();
  const double sin_th = std::sqrt(-E / V0), cos_th = std::sqrt(1.0 + E / V0);
  const double w = classical_frequency(s, E);
  const double phi = w * t + theta0;
  const double den = 1.0 - cos_th * std::cos(phi);
  const double x = std::log(den / (sin_th * sin_th)) / b;
  const double P = m / b * w * cos_th * std::sin(phi) / den;
  return {x, P, t};
}

PhaseState1D trajectory_1d(const SystemParams& s, double E, double theta0, double t) {
  return s.is_well() ? trajectory_well_1d(s, E, t, theta0) : trajectory_morse_1d(s, E, theta0, t);
}

std::pair<double, double> morse_turning_points(const SystemParams& s, double E) {
  check_regime(s, E);
  const double c = std::sqrt(1.0 + E / s.depth());
  // e^{−βx} = 1 ± cos θ
  return {-std::log(1.0 + c) / s.beta(), -std::log(1.0 - c) / s.beta()};
}

PhaseState2D trajectory_2d(const SystemParams& sx, const SystemParams& sy, double Ex, double Ey,
                           const Eigen::Vector2d& phases, double t) {
  const auto a = trajectory_1d(sx, Ex, phases(0), t);
  const auto b = trajectory_1d(sy, Ey, phases(1), t);
  PhaseState2D out;
  out.q << a.x, b.x;
  out.p << a.p, b.p;
  out.t = t;
  return out;
}

std::vector<PhaseState2D> sample_trajectory_2d(const SystemParams& sx, const SystemParams& sy, double Ex,
                                               double Ey, const Eigen::Vector2d& phases, double t_end,
                                               int samples) {
  if (samples < 0) throw ArgumentError("sample count must be non-negative");
  check_regime(sx, Ex);
  check_regime(sy, Ey);
  std::vector<PhaseState2D> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = samples == 1 ? 0.0 : t_end * k / (samples - 1);
    out.push_back(trajectory_2d(sx, sy, Ex, Ey, phases, t));
  }
  return out;
}

std::optional<double> closure_time(const SystemParams& sx, const SystemParams& sy, double Ex, double Ey,
                                   int n_max) {
  const auto r = closed_orbit_condition(sx, sy, Ex, Ey, n_max);
  if (!r) return std::nullopt;
  return 2.0 * pi * r->ny / classical_frequency(sx, Ex);
}

double phase_distance(const PhaseState2D& a, const PhaseState2D& b) {
  return std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff());
}

std::vector<PhaseState1D> random_on_shell_states(const SystemParams& s, double E, int count,
                                                 std::uint64_t seed, double wall_margin) {
  check_regime(s, E);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PhaseState1D> out;
  const double m = s.mass();
  double lo, hi;
  if (s.is_well()) {
    lo = -0.5 * s.length() + wall_margin;
    hi = 0.5 * s.length() - wall_margin;
  } else {
    std::tie(lo, hi) = morse_turning_points(s, E);
  }
  for (int i = 0; i < count; ++i) {
    const double x = lo + (hi - lo) * unit(rng);
    const double kin = s.is_well() ? E : std::max(0.0, E - s.potential(x));
    const double P = std::sqrt(2.0 * m * kin) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    out.push_back({x, P, 0.0});
  }
  return out;
}

ResidualReport verify_gha_classical(const SystemParams& s, std::span<const PhaseState1D> samples, double h) {
  if (samples.empty()) throw ArgumentError("verify_gha_classical needs at least one sample");
  const auto H = hamiltonian_function(s);
  const auto Ap = ladder_function(s, +1), Am = ladder_function(s, -1);
  const auto lam = lambda_function(s);
  const ClassicalStructure g(s);
  const auto bounds = stencil_bounds(s);

  double r_hp = 0, r_hm = 0, r_pm = 0, r_fac = 0, r_lp = 0, r_lm = 0;
  for (const auto& st : samples) {
    const double E = energy(s, st);
    check_regime(s, E);
    if (s.is_well() && std::abs(st.x) > 0.5 * s.length() - 10.0 * h)
      throw ArgumentError("sample closer than 10h to a wall");
    const PhasePoint z = to_point(st);
    const cplx ap = Ap(z), am = Am(z);
    const double l = g.lambda(E), a = g.a();
    r_hp = std::max(r_hp, std::abs(evolution_bracket(H, Ap, z, h, bounds) - I1 * l * ap));
    r_hm = std::max(r_hm, std::abs(evolution_bracket(H, Am, z, h, bounds) + I1 * l * am));
    r_pm = std::max(r_pm, std::abs(evolution_bracket(Ap, Am, z, h, bounds) + I1 * g.mu(E)));
    r_fac = std::max(r_fac, std::abs(ap * am - (E - g.gamma(E))));
    r_lp = std::max(r_lp, std::abs(evolution_bracket(lam, Ap, z, h, bounds) - 2.0 * I1 * a * ap));
    r_lm = std::max(r_lm, std::abs(evolution_bracket(lam, Am, z, h, bounds) + 2.0 * I1 * a * am));
  }
  const double tol = 1e-5;
  return {
      {"classical", "{H,A+} - i lambda(H) A+", r_hp, tol},
      {"classical", "{H,A-} + i lambda(H) A-", r_hm, tol},
      {"classical", "{A+,A-} + i mu(H)", r_pm, tol},
      {"classical", "A+ A- - (H - gamma(H))", r_fac, tol},
      {"classical", "{lambda(H),A+} - 2ia A+", r_lp, tol},
      {"classical", "{lambda(H),A-} + 2ia A-", r_lm, tol},
  };
}

cplx q_plus_initial(const SystemParams& s, double E, double theta0) {
  const auto st = trajectory_1d(s, E, theta0, 0.0);
  return ladder_value(s, st.x, st.p, E, +1);
}

double q_constancy(const SystemParams& s, double E, double theta0, double T_total, int steps) {
  check_regime(s, E);
  const ClassicalStructure g(s);
  const double lam = g.lambda(E);
  const double period = 2.0 * pi / lam;
  if (steps < 1 || !(T_total > 0.0) || steps * period / T_total < 100.0)
    throw ArgumentError("q_constancy needs at least 100 steps per period");
  const cplx q0 = q_plus_initial(s, E, theta0);
  if (!(std::abs(q0) > 1e-300))
    throw DegenerateNormalizationError("Q(0) vanishes; relative drift undefined");
  double drift = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double t = T_total * k / steps;
    const auto st = trajectory_1d(s, E, theta0, t);
    const cplx ap = ladder_value(s, st.x, st.p, E, +1);
    const cplx qp = ap * std::exp(-I1 * lam * t);
    const cplx qm = std::conj(ap) * std::exp(I1 * lam * t);
    drift = std::max({drift, std::abs(qp - q0) / std::abs(q0), std::abs(qm - std::conj(q0)) / std::abs(q0)});
  }
  return drift;
}

double invert_trajectory_well(const SystemParams& s, double E, double theta0, double t) {
  check_regime(s, E);
  const double phi = theta0 + ClassicalStructure(s).lambda(E) * t;
  return s.length() / pi * std::atan2(std::cos(phi), std::abs(std::sin(phi)));
}

PhaseFunction ladder_product_function(const SystemParams& sx, const SystemParams& sy, int k, int l, int sign) {
  if (k < 1 || l < 1) throw ArgumentError("ladder powers must be >= 1");
  const auto ax = ladder_function(sx, sign, 0, 2);
  const auto ay = ladder_function(sy, -sign, 1, 2);
  return [ax, ay, k, l](const PhasePoint& z) { return std::pow(ax(z), k) * std::pow(ay(z), l); };
}

ProductBracket product_bracket_check(const SystemParams& sx, const SystemParams& sy, int k, int l,
                                     const PhaseState2D& st, int sign, double h) {
  const auto Hx = hamiltonian_function(sx, 0, 2), Hy = hamiltonian_function(sy, 1, 2);
  const PhaseFunction H = [Hx, Hy](const PhasePoint& z) { return Hx(z) + Hy(z); };
  const auto Ik = ladder_product_function(sx, sy, k, l, sign);
  const PhasePoint z = to_point(st);
  const double Ex = Hx(z).real(), Ey = Hy(z).real();
  check_regime(sx, Ex);
  check_regime(sy, Ey);
  const auto bounds = bounds_2d(sx, sy);
  ProductBracket out;
  out.lhs = evolution_bracket(H, Ik, z, h, bounds);
  const double rate = k * ClassicalStructure(sx).lambda(Ex) - l * ClassicalStructure(sy).lambda(Ey);
  out.rhs = static_cast<double>(sign) * I1 * rate * Ik(z);
  out.residual = std::abs(out.lhs - out.rhs);
  out.within_tolerance = out.residual < 1e-5 * (1.0 + std::abs(out.rhs));
  return out;
}

cplx triple_bracket(const PhaseFunction& H, const PhaseFunction& F, const PhasePoint& z, double h,
                    std::span<const CoordinateBounds> q_bounds) {
  const std::vector<CoordinateBounds> b(q_bounds.begin(), q_bounds.end());
  const PhaseFunction g1 = [&, b](const PhasePoint& w) { return evolution_bracket(H, F, w, h, b); };
  const PhaseFunction g2 = [&, b](const PhasePoint& w) { return evolution_bracket(g1, F, w, h, b); };
  return evolution_bracket(g2, F, z, h, b);
}

double triple_bracket_check(const SystemParams& sx, const SystemParams& sy, int k, int l,
                            const PhaseState2D& st, int sign, double h) {
  const auto Hx = hamiltonian_function(sx, 0, 2), Hy = hamiltonian_function(sy, 1, 2);
  const PhaseFunction H = [Hx, Hy](const PhasePoint& z) { return Hx(z) + Hy(z); };
  const PhasePoint z = to_point(st);
  check_regime(sx, Hx(z).real());
  check_regime(sy, Hy(z).real());
  return std::abs(triple_bracket(H, ladder_product_function(sx, sy, k, l, sign), z, h, bounds_2d(sx, sy)));
}

}  // namespace ghalab
