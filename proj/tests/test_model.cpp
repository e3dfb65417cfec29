#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "ghalab/fd_eigensolver.hpp"
#include "ghalab/model.hpp"

using namespace ghalab;
using doctest::Approx;

namespace {

const auto well = SystemParams::infinite_well();
const auto morse15 = SystemParams::morse(15.0);
const auto morse8 = SystemParams::morse(8.0);

// frozen from the closed forms (p = (√120 − 1)/2 for V0 = 15)
constexpr double kWellE1 = 1.2337005501361697;
constexpr double kMorse15E[] = {-12.386387212474169, -7.909161637422509, -4.4319360623708475,
                                -1.954710487319186, -0.47748491226752493};

}  // namespace

TEST_CASE("parameters and derived constants") {
  CHECK(well.alpha() == Approx(2 * std::numbers::pi / (2 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK(morse15.epsilon() == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(morse15.nu() == Approx(std::sqrt(120.0)).epsilon(1e-15));
  CHECK(morse8.nu() == Approx(8.0).epsilon(1e-15));
  CHECK(morse8.p() == Approx(3.5).epsilon(1e-15));
  CHECK_THROWS_AS(well.beta(), UnsupportedError);
  CHECK_THROWS_AS(morse15.length(), UnsupportedError);
  CHECK_THROWS_AS(SystemParams::morse(-1.0), ArgumentError);
  CHECK_THROWS_AS(SystemParams::infinite_well(0.0), ArgumentError);
  // same inputs, same derived values on every access
  CHECK(morse15.p() == morse15.p());
}

TEST_CASE("closed-form spectra") {
  CHECK(spectrum_1d(well, 1) == Approx(kWellE1).epsilon(1e-15));
  CHECK(spectrum_1d(well, 3) == Approx(9 * kWellE1).epsilon(1e-15));
  for (int n = 0; n < 5; ++n) CHECK(spectrum_1d(morse15, n) == Approx(kMorse15E[n]).epsilon(1e-14));
  // top label is the least bound and still negative
  CHECK(spectrum_1d(morse15, 4) < 0.0);
  CHECK(spectrum_1d(morse15, 4) > spectrum_1d(morse15, 3));
  CHECK_THROWS_AS(spectrum_1d(morse15, 5), DomainError);
  CHECK_THROWS_AS(spectrum_1d(well, 0), DomainError);
  try {
    spectrum_1d(morse15, 7);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("<= 4") != std::string::npos);
  }
}

TEST_CASE("well spectrum matches a finite-difference eigensolver") {
  const auto fd = fd_lowest_states([](double) { return 0.0; }, 1.0, 1.0, -1.0, 1.0, 4096, 10,
                                   FdBoundary::OddReflection);
  for (int n = 1; n <= 10; ++n) {
    const double exact = spectrum_1d(well, n);
    CHECK(std::abs(fd.energies(n - 1) - exact) / exact < 1e-6);
  }
}

TEST_CASE("Morse spectrum matches a finite-difference eigensolver") {
  for (const auto& s : {morse15, morse8}) {
    const int count = *bound_state_count(s);
    // one extra level: it must lie in the (boxed) continuum
    const auto fd = fd_lowest_states([&s](double x) { return s.potential(x); }, 1.0, 1.0, -2.5, 60.0, 4096,
                                     count + 1);
    for (int n = 0; n < count; ++n) {
      const double exact = spectrum_1d(s, n);
      CHECK(std::abs(fd.energies(n) - exact) / std::abs(exact) < 1e-6);
    }
    CHECK(fd.energies(count) > 0.0);
  }
}

TEST_CASE("bound state count") {
  CHECK(*bound_state_count(morse15) == 5);
  CHECK(*bound_state_count(morse8) == 4);
  CHECK_FALSE(bound_state_count(well).has_value());
  CHECK(*bound_state_count(SystemParams::morse(0.01)) == 0);
  // ν = 7 gives integral p = 3: the level n = 3 would sit at E = 0, not bound
  const auto integral = SystemParams::morse(49.0 / 8.0);
  CHECK(integral.p_is_integral());
  CHECK(*bound_state_count(integral) == 3);
  CHECK_FALSE(morse15.p_is_integral());
}

TEST_CASE("classical frequencies") {
  CHECK(classical_frequency(well, 2.0) == Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(classical_frequency(morse15, -2.0) == Approx(2.0).epsilon(1e-15));
  CHECK(classical_frequency(morse15, -4.5) == Approx(3.0).epsilon(1e-15));
  CHECK(classical_frequency(morse15, -1e-12) < 1e-5);
  CHECK_THROWS_AS(classical_frequency(well, 0.0), RegimeError);
  CHECK_THROWS_AS(classical_frequency(morse15, 1.0), RegimeError);
  CHECK_THROWS_AS(classical_frequency(morse15, -15.0), RegimeError);
}

TEST_CASE("closed-orbit condition") {
  CHECK(closed_orbit_condition(well, well, 2.0, 0.5, 10) == OrbitRatio{1, 2});
  CHECK(closed_orbit_condition(morse15, morse15, -2.0, -4.5, 10) == OrbitRatio{3, 2});
  CHECK(closed_orbit_condition(well, well, 1.3, 1.3, 10) == OrbitRatio{1, 1});
  CHECK(closed_orbit_condition(morse15, morse15, -3.0, -3.0, 1) == OrbitRatio{1, 1});
  CHECK_FALSE(closed_orbit_condition(well, well, 2.0, 2.0 * std::numbers::pi, 20).has_value());
  CHECK_THROWS_AS(closed_orbit_condition(well, morse15, 1.0, -1.0, 5), UnsupportedError);

  // swapping the axes swaps the ratio
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-14.0, -0.1);
  std::uniform_int_distribution<int> k(1, 6);
  for (int i = 0; i < 200; ++i) {
    double Ex = u(rng), Ey = u(rng);
    if (i % 2) Ey = Ex * std::pow(double(k(rng)) / k(rng), 2.0);  // commensurate by construction
    if (!(Ey > -15.0 && Ey < 0.0)) continue;
    const auto a = closed_orbit_condition(morse15, morse15, Ex, Ey, 12);
    const auto b = closed_orbit_condition(morse15, morse15, Ey, Ex, 12);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*b == OrbitRatio{a->ny, a->nx});
  }
}

TEST_CASE("degeneracies of the well") {
  const auto rep = enumerate_degeneracies(well, 8);
  // oracle: exact integer energies nx² + ny²
  std::map<int, std::set<std::pair<int, int>>> exact;
  for (int a = 1; a <= 8; ++a)
    for (int b = 1; b <= 8; ++b) exact[a * a + b * b].insert({a, b});
  REQUIRE(rep.classes.size() == exact.size());
  auto it = exact.begin();
  for (const auto& c : rep.classes) {
    std::set<std::pair<int, int>> got;
    for (auto q : c.members) got.insert({q.nx, q.ny});
    CHECK(got == it->second);
    ++it;
  }
  bool found = false;
  for (const auto& c : rep.classes) {
    if (c.members.size() != 3 || !(c.members[0] == LabelPair{1, 7})) continue;
    found = true;
    CHECK(c.energy == Approx(50 * kWellE1).epsilon(1e-14));
    for (const auto& r : c.relations) {
      const bool transposed = r.first.nx == r.second.ny && r.first.ny == r.second.nx;
      CHECK((r.tag == RelationTag::Permutation) == transposed);
    }
  }
  CHECK(found);
  for (const auto& c : rep.classes)
    for (auto q : c.members)
      if (q.nx != q.ny)
        CHECK(std::find(c.members.begin(), c.members.end(), LabelPair{q.ny, q.nx}) != c.members.end());
  CHECK(rep.classes.front().energy < rep.classes.back().energy);
}

TEST_CASE("degeneracies of the Morse system") {
  const auto rep8 = enumerate_degeneracies(morse8, 3);
  // oracle: 4·(p−n)² is an integer for p = 7/2
  std::map<int, std::set<std::pair<int, int>>> exact;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) exact[(7 - 2 * a) * (7 - 2 * a) + (7 - 2 * b) * (7 - 2 * b)].insert({a, b});
  CHECK(rep8.classes.size() == exact.size());
  const auto arith = rep8.arithmetical();
  REQUIRE(!arith.empty());
  bool found = false;
  for (const auto& c : rep8.classes)
    if (c.members.size() == 3) {
      found = true;
      CHECK(c.energy == Approx(-6.25).epsilon(1e-14));
      CHECK(c.members[0] == LabelPair{0, 3});
      CHECK(c.members[1] == LabelPair{1, 1});
      CHECK(c.members[2] == LabelPair{3, 0});
    }
  CHECK(found);
  CHECK(enumerate_degeneracies(morse15, 4).arithmetical().empty());
  CHECK_THROWS_AS(enumerate_degeneracies(morse15, 5), DomainError);
  for (const auto& c : enumerate_degeneracies(morse15, 4).classes) CHECK(c.members.size() <= 2);
}
