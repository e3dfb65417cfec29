#include "ghalab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace ghalab {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ArgumentError(std::string(name) + " must be finite and strictly positive");
}

}  // namespace

SystemParams SystemParams::infinite_well(double L, double m, double hbar) {
  require_positive(L, "L");
  require_positive(m, "m");
  require_positive(hbar, "hbar");
  return SystemParams(SystemKind::InfiniteWell, m, hbar, L, 0.0, 0.0);
}

SystemParams SystemParams::morse(double V0, double beta, double m, double hbar) {
  require_positive(V0, "V0");
  require_positive(beta, "beta");
  require_positive(m, "m");
  require_positive(hbar, "hbar");
  return SystemParams(SystemKind::Morse, m, hbar, 0.0, beta, V0);
}

double SystemParams::length() const {
  if (!is_well()) throw UnsupportedError("L is defined for the infinite well only");
  return L_;
}

double SystemParams::beta() const {
  if (!is_morse()) throw UnsupportedError("beta is defined for the Morse system only");
  return beta_;
}

double SystemParams::depth() const {
  if (!is_morse()) throw UnsupportedError("V0 is defined for the Morse system only");
  return V0_;
}

double SystemParams::alpha() const {
  return 2.0 * std::numbers::pi / (length() * std::sqrt(2.0 * m_));
}

double SystemParams::epsilon() const { return 2.0 * beta() / std::sqrt(2.0 * m_); }

double SystemParams::nu() const {
  return std::sqrt(8.0 * m_ * depth() / (beta_ * beta_ * hbar_ * hbar_));
}

double SystemParams::p() const { return 0.5 * (nu() - 1.0); }

bool SystemParams::p_is_integral() const {
  const double q = p();
  return std::abs(q - std::round(q)) <= 1e-12 * std::max(1.0, std::abs(q));
}

double SystemParams::potential(double x) const {
  const double e = std::exp(-beta() * x);
  return V0_ * (e * e - 2.0 * e);
}

int min_label(const SystemParams& s) { return s.is_well() ? 1 : 0; }

std::optional<int> max_label(const SystemParams& s) {
  if (s.is_well()) return std::nullopt;
  const double p = s.p();
  if (p <= 0.0) return -1;
  // bound states need E_n < 0, i.e. n < p strictly
  if (s.p_is_integral()) return static_cast<int>(std::round(p)) - 1;
  return static_cast<int>(std::floor(p));
}

void check_label(const SystemParams& s, int n) {
  if (s.is_well()) {
    if (n < 1) throw DomainError("well label must satisfy n >= 1, got " + std::to_string(n));
    return;
  }
  const int top = *max_label(s);
  if (n < 0 || n > top)
    throw DomainError("Morse label must satisfy 0 <= n <= " + std::to_string(top) +
                      " (largest integer below p), got " + std::to_string(n));
}

double spectrum_1d(const SystemParams& s, int n) {
  check_label(s, n);
  return spectrum_formal(s, n);
}

double spectrum_formal(const SystemParams& s, double n) {
  const double hb = s.hbar();
  if (s.is_well()) {
    const double a = s.alpha();
    return a * a * hb * hb * n * n / 4.0;
  }
  const double e = s.epsilon(), d = s.p() - n;
  return -hb * hb * e * e * d * d / 4.0;
}

std::optional<int> bound_state_count(const SystemParams& s) {
  if (s.is_well()) return std::nullopt;
  return *max_label(s) + 1;
}

void check_regime(const SystemParams& s, double E) {
  if (!std::isfinite(E)) throw RegimeError("energy must be finite");
  if (s.is_well()) {
    if (!(E > 0.0)) throw RegimeError("well energy must lie in (0, inf), got " + std::to_string(E));
    return;
  }
  if (!(E > -s.depth() && E < 0.0))
    throw RegimeError("Morse energy must lie in (" + std::to_string(-s.depth()) + ", 0), got " +
                      std::to_string(E));
}

double classical_frequency(const SystemParams& s, double E) {
  check_regime(s, E);
  if (s.is_well()) return std::numbers::pi / s.length() * std::sqrt(2.0 * E / s.mass());
  return s.beta() * std::sqrt(-2.0 * E / s.mass());
}

std::optional<OrbitRatio> closed_orbit_condition(const SystemParams& sx, const SystemParams& sy,
                                                 double Ex, double Ey, int n_max) {
  if (sx.kind() != sy.kind())
    throw UnsupportedError("closed-orbit condition for mixed well/Morse systems is not supported");
  if (n_max < 1) throw ArgumentError("n_max must be >= 1");
  const double wx = classical_frequency(sx, Ex), wy = classical_frequency(sy, Ey);
  for (int total = 2; total <= 2 * n_max; ++total) {
    for (int nx = std::max(1, total - n_max); nx <= std::min(n_max, total - 1); ++nx) {
      const int ny = total - nx;
      if (std::gcd(nx, ny) != 1) continue;
      const double lhs = nx * wx, rhs = ny * wy;
      if (std::abs(lhs - rhs) <= 1e-9 * std::max(lhs, rhs)) return OrbitRatio{nx, ny};
    }
  }
  return std::nullopt;
}

std::vector<PairRelation> DegeneracyReport::arithmetical() const {
  std::vector<PairRelation> out;
  for (const auto& c : classes)
    for (const auto& r : c.relations)
      if (r.tag == RelationTag::Arithmetical) out.push_back(r);
  return out;
}

DegeneracyReport enumerate_degeneracies(const SystemParams& s, int n_max) {
  const int lo = min_label(s);
  check_label(s, n_max);

  struct Entry {
    double E;
    LabelPair q;
  };
  std::vector<Entry> all;
  for (int nx = lo; nx <= n_max; ++nx)
    for (int ny = lo; ny <= n_max; ++ny)
      all.push_back({spectrum_1d(s, nx) + spectrum_1d(s, ny), {nx, ny}});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.E < b.E; });

  DegeneracyReport rep;
  for (const auto& e : all) {
    if (!rep.classes.empty()) {
      auto& c = rep.classes.back();
      if (std::abs(e.E - c.energy) <= kDegeneracyTolerance * std::max(std::abs(e.E), std::abs(c.energy))) {
        c.members.push_back(e.q);
        continue;
      }
    }
    rep.classes.push_back({e.E, {e.q}, {}});
  }
  for (auto& c : rep.classes) {
    std::sort(c.members.begin(), c.members.end(),
              [](LabelPair a, LabelPair b) { return std::pair(a.nx, a.ny) < std::pair(b.nx, b.ny); });
    for (std::size_t i = 0; i < c.members.size(); ++i)
      for (std::size_t j = i + 1; j < c.members.size(); ++j) {
        const auto a = c.members[i], b = c.members[j];
        const bool transposed = a.nx == b.ny && a.ny == b.nx;
        c.relations.push_back({a, b, transposed ? RelationTag::Permutation : RelationTag::Arithmetical});
      }
  }
  return rep;
}

}  // namespace ghalab
