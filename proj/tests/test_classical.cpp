#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "ghalab/classical.hpp"

using namespace ghalab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
const auto well = SystemParams::infinite_well();
const auto morse = SystemParams::morse(15.0);
const cplx I1(0.0, 1.0);

// Test-only oracle: adaptive Dormand–Prince integration of Newton's equation in the Morse potential.
std::vector<double> integrate_morse(const SystemParams& s, double x0, double p0, const std::vector<double>& times) {
  using State = std::array<double, 2>;
  const double V0 = s.depth(), b = s.beta(), m = s.mass();
  auto rhs = [&](const State& z, State& dz, double) {
    const double e = std::exp(-b * z[0]);
    dz[0] = z[1] / m;
    dz[1] = -V0 * (-2.0 * b * e * e + 2.0 * b * e);
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
  State z{x0, p0};
  std::vector<double> xs;
  double t = 0.0;
  for (double target : times) {
    ode::integrate_adaptive(stepper, rhs, z, t, target, 1e-3);
    t = target;
    xs.push_back(z[0]);
  }
  return xs;
}

// Root of V(x) = E by bisection on a bracketing interval.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Period from upward zero crossings of x(t) − mean over a long sample.
double measured_period(const SystemParams& s, double E, double theta0) {
  const double T_guess = 2 * pi / classical_frequency(s, E);
  const int per = 4000, periods = 6;
  std::vector<double> t, x;
  for (int k = 0; k <= per * periods; ++k) {
    t.push_back(T_guess * k / per);
    x.push_back(trajectory_1d(s, E, theta0, t.back()).x);
  }
  double mean = 0.0;
  for (int k = 0; k < per * periods; ++k) mean += x[k];
  mean /= per * periods;
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    if (x[k] - mean < 0 && x[k + 1] - mean >= 0) {
      const double c = bisect([&](double tt) { return trajectory_1d(s, E, theta0, tt).x - mean; }, t[k], t[k + 1]);
      crossings.push_back(c);
    }
  return (crossings.back() - crossings.front()) / (crossings.size() - 1);
}

}  // namespace

TEST_CASE("well bounce trajectory") {
  const double E = 2.0, p0 = 2.0, L = 2.0, m = 1.0;
  CHECK(trajectory_well_1d(well, E, 0.1).x == Approx(0.2).epsilon(1e-14));
  // free flight reaches the wall at t = mL/(2p0)
  const auto hit = trajectory_well_1d(well, E, m * L / (2 * p0));
  CHECK(hit.x == Approx(L / 2).epsilon(1e-14));
  const double T = 2 * m * L / p0;
  const auto back = trajectory_well_1d(well, E, T);
  CHECK(std::abs(back.x) < 1e-14);
  CHECK(back.p > 0.0);
  const auto half = trajectory_well_1d(well, E, 0.75 * T);
  CHECK(half.x == Approx(-L / 2 + 0.0).epsilon(1e-13));
  for (int k = 0; k < 1000; ++k) {
    const auto st = trajectory_well_1d(well, E, 0.0137 * k);
    CHECK(std::abs(st.x) <= L / 2);
    CHECK(energy(well, st) == Approx(E).epsilon(1e-14));
  }
  CHECK_THROWS_AS(trajectory_well_1d(well, 0.0, 1.0), RegimeError);
}

TEST_CASE("Morse trajectory") {
  const double E = -2.0;
  const double sin2 = -E / 15.0;
  // ωt + θ₀ = π/2
  CHECK(trajectory_morse_1d(morse, E, pi / 2, 0.0).x == Approx(std::log(1 / sin2)).epsilon(1e-14));
  // extrema equal the roots of V(x) = E
  const auto Vm = [&](double x) { return morse.potential(x) - E; };
  const double inner = bisect(Vm, -1.0, 0.0), outer = bisect(Vm, 0.0, 5.0);
  double lo = 1e9, hi = -1e9;
  for (int k = 0; k <= 20000; ++k) {
    const auto st = trajectory_morse_1d(morse, E, 0.0, pi * k / 20000.0);
    lo = std::min(lo, st.x);
    hi = std::max(hi, st.x);
    CHECK(energy(morse, st) == Approx(E).epsilon(1e-10));
  }
  CHECK(lo == Approx(inner).epsilon(1e-12));
  CHECK(hi == Approx(outer).epsilon(1e-9));
  const auto tp = morse_turning_points(morse, E);
  CHECK(tp.first == Approx(inner).epsilon(1e-12));
  CHECK(tp.second == Approx(outer).epsilon(1e-12));

  // adaptive ODE oracle from the inner turning point at rest, five periods
  const double T = 2 * pi / classical_frequency(morse, E);
  std::vector<double> times;
  for (int k = 1; k <= 500; ++k) times.push_back(5 * T * k / 500);
  const auto xs = integrate_morse(morse, inner, 0.0, times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    worst = std::max(worst, std::abs(xs[k] - trajectory_morse_1d(morse, E, 0.0, times[k]).x));
  CHECK(worst < 1e-8);
  CHECK_THROWS_AS(trajectory_morse_1d(morse, 0.5, 0.0, 1.0), RegimeError);
  CHECK_THROWS_AS(trajectory_morse_1d(morse, -16.0, 0.0, 1.0), RegimeError);
}

TEST_CASE("measured oscillation frequency equals lambda(E)") {
  for (double E : {0.7, 2.0, 5.5}) {
    const double w = 2 * pi / measured_period(well, E, -pi / 2);
    CHECK(std::abs(w - ClassicalStructure(well).lambda(E)) < 1e-6);
  }
  for (double E : {-12.0, -4.5, -2.0, -0.3}) {
    const double w = 2 * pi / measured_period(morse, E, 0.0);
    CHECK(std::abs(w - ClassicalStructure(morse).lambda(E)) < 1e-6);
  }
  // Morse frequency from the integrated Newton equation at the two figure energies
  for (double E : {-2.0, -4.5}) {
    const auto [inner, outer] = morse_turning_points(morse, E);
    (void)outer;
    const double T = 2 * pi / classical_frequency(morse, E);
    const auto x = integrate_morse(morse, inner, 0.0, {T});
    CHECK(x[0] == Approx(inner).epsilon(1e-9));
  }
}

TEST_CASE("two-dimensional orbits close") {
  const Eigen::Vector2d wp(-pi / 2, -pi / 2), mp(0.0, 0.0);
  const auto a0 = trajectory_2d(well, well, 2.0, 0.5, wp, 0.0);
  CHECK(phase_distance(a0, trajectory_2d(well, well, 2.0, 0.5, wp, 4.0)) < 1e-9);
  CHECK(phase_distance(a0, trajectory_2d(well, well, 2.0, 0.5, wp, 2.0)) > 0.1);
  CHECK(*closure_time(well, well, 2.0, 0.5) == Approx(4.0).epsilon(1e-14));

  const auto b0 = trajectory_2d(morse, morse, -2.0, -4.5, mp, 0.0);
  CHECK(phase_distance(b0, trajectory_2d(morse, morse, -2.0, -4.5, mp, 2 * pi)) < 1e-8);
  CHECK(phase_distance(b0, trajectory_2d(morse, morse, -2.0, -4.5, mp, pi)) > 0.1);
  CHECK(*closure_time(morse, morse, -2.0, -4.5) == Approx(2 * pi).epsilon(1e-14));

  for (double t : {0.3, 1.7, 5.2}) {
    const auto st = trajectory_2d(morse, morse, -3.0, -3.0, mp, t);
    CHECK(st.q(0) == st.q(1));
  }
  CHECK(sample_trajectory_2d(well, well, 2.0, 0.5, wp, 4.0, 0).empty());
  const auto path = sample_trajectory_2d(well, well, 2.0, 0.5, wp, 4.0, 401);
  CHECK(path.back().t == 4.0);
}

TEST_CASE("ladder functions") {
  const double p0 = 2.0;
  const auto a = ladder_eval(well, {0.0, p0, 0.0}, 2.0);
  CHECK(std::abs(a.value - (-I1 * p0 / std::sqrt(2.0))) < 1e-15);
  const auto tp = morse_turning_points(morse, -2.0);
  const auto b = ladder_eval(morse, {tp.first, 0.0, 0.0}, -2.0);
  CHECK(b.value.imag() == 0.0);
  CHECK_THROWS_AS(ladder_eval(well, {0.0, 3.0, 0.0}, 2.0), ConsistencyError);

  // |A|² against its algebraic expansion, random on-shell points
  for (const auto& [s, E] : {std::pair{well, 2.0}, std::pair{well, 0.37}, std::pair{morse, -2.0},
                             std::pair{morse, -11.0}}) {
    const double expect = s.is_well() ? E : -15.0 * 15.0 / E - 15.0;
    for (const auto& st : random_on_shell_states(s, E, 100, 11)) {
      const auto v = ladder_eval(s, st, E);
      CHECK(std::norm(v.value) == Approx(expect).epsilon(1e-10));
      const PhasePoint z = to_point(st);
      CHECK(std::abs(ladder_function(s, -1)(z) - std::conj(ladder_function(s, +1)(z))) < 1e-14);
    }
  }
}

TEST_CASE("numerical Poisson bracket") {
  const PhaseFunction x = [](const PhasePoint& z) -> cplx { return z(0); };
  const PhaseFunction P = [](const PhasePoint& z) -> cplx { return z(1); };
  PhasePoint z(2);
  z << 0.3, -1.1;
  CHECK(std::abs(poisson_bracket(x, P, z, 1e-4) - 1.0) < 1e-10);
  const auto H = hamiltonian_function(morse);
  CHECK(std::abs(poisson_bracket(H, H, z, 1e-4)) < 1e-10);

  const auto st = random_on_shell_states(well, 2.0, 1, 3).front();
  const PhasePoint zw = to_point(st);
  const auto Hw = hamiltonian_function(well);
  const auto Ap = ladder_function(well, +1);
  const cplx want = I1 * ClassicalStructure(well).lambda(2.0) * Ap(zw);
  CHECK(std::abs(evolution_bracket(Hw, Ap, zw, 1e-4, stencil_bounds(well)) - want) < 1e-6);

  PhasePoint edge(2);
  edge << 1.0 - 5e-5, 2.0;
  CHECK_THROWS_AS(poisson_bracket(Hw, Ap, edge, 1e-4, stencil_bounds(well)), StencilError);
}

TEST_CASE("classical algebra residuals") {
  for (const auto& [s, E] : {std::pair{well, 2.0}, std::pair{morse, -2.0}, std::pair{morse, -9.0}}) {
    const auto states = random_on_shell_states(s, E, 50, 1234);
    const auto rep = verify_gha_classical(s, states);
    for (const auto& c : rep) {
      INFO(c.check, " ", c.max_residual);
      CHECK(c.pass());
    }
  }
  CHECK_THROWS_AS(verify_gha_classical(well, std::span<const PhaseState1D>{}), ArgumentError);

  // γ = 0 for the well: the factorization residual is |A⁺A⁻ − H|
  const auto states = random_on_shell_states(well, 2.0, 20, 5);
  double direct = 0.0;
  for (const auto& st : states) {
    const PhasePoint z = to_point(st);
    direct = std::max(direct, std::abs(ladder_function(well, +1)(z) * ladder_function(well, -1)(z) - energy(well, st)));
  }
  CHECK(verify_gha_classical(well, states)[3].max_residual == direct);
}

TEST_CASE("time-dependent integrals Q") {
  const double Tw = 2 * pi / classical_frequency(well, 2.0), Tm = 2 * pi / classical_frequency(morse, -2.0);
  CHECK(q_constancy(well, 2.0, -pi / 2, 10 * Tw, 2000) < 1e-8);
  CHECK(q_constancy(morse, -2.0, 0.0, 10 * Tm, 2000) < 1e-8);
  CHECK(q_constancy(morse, -2.0, 0.7, 10 * Tm, 2000) < 1e-8);
  CHECK_THROWS_AS(q_constancy(well, 2.0, -pi / 2, 10 * Tw, 500), ArgumentError);
  // q⁺ = c(E) e^{iθ}: phase θ₀ for the well, θ₀ + π for Morse (c(E) taken positive)
  CHECK(std::arg(q_plus_initial(well, 2.0, -pi / 2)) == Approx(-pi / 2).epsilon(1e-14));
  CHECK(std::arg(q_plus_initial(well, 2.0, 0.4)) == Approx(0.4).epsilon(1e-14));
  CHECK(std::abs(std::arg(q_plus_initial(morse, -2.0, 0.0))) == Approx(pi).epsilon(1e-14));
  CHECK(std::arg(q_plus_initial(morse, -2.0, -0.6)) == Approx(-0.6 + pi).epsilon(1e-12));
}

TEST_CASE("position from the ladder phase") {
  CHECK(std::abs(invert_trajectory_well(well, 2.0, -pi / 2, 0.0)) < 1e-15);
  CHECK(invert_trajectory_well(well, 2.0, -pi / 2, 0.1) == Approx(0.2).epsilon(1e-14));
  double worst = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double t = 6.0 * k / 4000;
    for (double th : {-pi / 2, 0.3, 2.9})
      worst = std::max(worst, std::abs(invert_trajectory_well(well, 2.0, th, t) - trajectory_well_1d(well, 2.0, t, th).x));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("two-dimensional ladder products") {
  const Eigen::Vector2d wp(-pi / 2 + 0.2, -pi / 2 + 0.9);
  const auto st = trajectory_2d(well, well, 2.0, 0.5, wp, 0.0);
  const auto closed = product_bracket_check(well, well, 1, 2, st);
  CHECK(closed.within_tolerance);
  CHECK(std::abs(closed.lhs) < 1e-6);
  const auto same = product_bracket_check(morse, morse, 1, 1, trajectory_2d(morse, morse, -3.0, -3.0, {0.4, 1.3}, 0.0));
  CHECK(std::abs(same.lhs) < 1e-6);

  const auto generic = trajectory_2d(morse, morse, -2.0, -3.0, {0.5, 2.0}, 0.0);
  const auto g = product_bracket_check(morse, morse, 1, 1, generic);
  const cplx expect = I1 * std::sqrt(2.0) * (std::sqrt(2.0) - std::sqrt(3.0)) *
                      ladder_product_function(morse, morse, 1, 1, +1)(to_point(generic));
  CHECK(std::abs(g.rhs - expect) < 1e-12 * (1 + std::abs(expect)));
  CHECK(g.within_tolerance);
  const auto gm = product_bracket_check(morse, morse, 2, 1, generic, -1);
  CHECK(gm.within_tolerance);

  // the bracket vanishes exactly on commensurate energy pairs
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.5, 5.0), ph(-pi, pi);
  int closed_hits = 0, open_hits = 0;
  for (int i = 0; i < 110; ++i) {
    int k = 1, l = 2;
    double Ex = u(rng), Ey = u(rng);
    const bool construct = i >= 100;
    if (construct) {
      k = 1 + i % 3;
      l = 1 + (i / 3) % 3;
      Ey = Ex * double(k * k) / (l * l);
    }
    const auto s2 = trajectory_2d(well, well, Ex, Ey, {ph(rng) * 0.9, ph(rng) * 0.9}, 0.0);
    if (std::abs(s2.q(0)) > 0.99 || std::abs(s2.q(1)) > 0.99) continue;
    const auto r = product_bracket_check(well, well, k, l, s2);
    CHECK(r.within_tolerance);
    const bool commensurate = std::abs(k * std::sqrt(Ex) - l * std::sqrt(Ey)) < 1e-9;
    const bool vanishes = std::abs(r.lhs) < 1e-6;
    CHECK(vanishes == commensurate);
    (commensurate ? closed_hits : open_hits)++;
  }
  CHECK(closed_hits >= 8);
  CHECK(open_hits >= 80);
}

TEST_CASE("triple bracket constraint") {
  const auto sw = trajectory_2d(well, well, 1.5, 0.8, {-1.2, -0.4}, 0.0);
  CHECK(triple_bracket_check(well, well, 1, 1, sw) < 1e-4);
  // nested differences lose ~|I|³/h³ to roundoff; the absolute bound is met near the well bottom
  const auto sm = trajectory_2d(morse, morse, -14.8, -14.6, {0.8, 2.1}, 0.0);
  CHECK(triple_bracket_check(morse, morse, 2, 1, sm) < 1e-4);
  CHECK(triple_bracket_check(morse, morse, 2, 1, sm, -1) < 1e-4);
  const PhaseFunction constant = [](const PhasePoint&) -> cplx { return {2.5, -1.0}; };
  const auto H = hamiltonian_function(morse, 0, 2);
  CHECK(triple_bracket(H, constant, to_point(sm), 1e-3) == cplx(0.0));
}
