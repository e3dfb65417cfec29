#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ghalab/errors.hpp"

namespace ghalab {

enum class SystemKind { InfiniteWell, Morse };

// Physical constants of one 1D system.  Derived constants are recomputed on
// every access so they can never go stale.
class SystemParams {
 public:
  static SystemParams infinite_well(double L = 2.0, double m = 1.0, double hbar = 1.0);
  static SystemParams morse(double V0 = 15.0, double beta = 1.0, double m = 1.0, double hbar = 1.0);

  SystemKind kind() const { return kind_; }
  bool is_well() const { return kind_ == SystemKind::InfiniteWell; }
  bool is_morse() const { return kind_ == SystemKind::Morse; }

  double mass() const { return m_; }
  double hbar() const { return hbar_; }
  double length() const;  // well only
  double beta() const;    // Morse only
  double depth() const;   // Morse only (V0)

  // well: 2π/(L√(2m))
  double alpha() const;
  // Morse: 2β/√(2m), √(8mV0)/(βħ), (ν−1)/2
  double epsilon() const;
  double nu() const;
  double p() const;
  bool p_is_integral() const;

  // Classical potential (Morse only; the well potential is zero inside the box).
  double potential(double x) const;

  bool operator==(const SystemParams&) const = default;

 private:
  SystemParams(SystemKind k, double m, double hbar, double L, double beta, double V0)
      : kind_(k), m_(m), hbar_(hbar), L_(L), beta_(beta), V0_(V0) {}

  SystemKind kind_;
  double m_, hbar_;
  double L_ = 0.0;
  double beta_ = 0.0, V0_ = 0.0;
};

// Smallest admissible label: 1 for the well, 0 for Morse.
int min_label(const SystemParams& s);
// Largest admissible label; nullopt for the well (infinite spectrum).  For
// Morse returns -1 when there is no bound state.
std::optional<int> max_label(const SystemParams& s);
void check_label(const SystemParams& s, int n);

double spectrum_1d(const SystemParams& s, int n);
// Closed form at any real label, no admissibility check (formal extension).
double spectrum_formal(const SystemParams& s, double n);

// nullopt means unbounded (well); Morse with p < 0 gives 0.
std::optional<int> bound_state_count(const SystemParams& s);

void check_regime(const SystemParams& s, double E);
double classical_frequency(const SystemParams& s, double E);

struct OrbitRatio {
  int nx, ny;
  bool operator==(const OrbitRatio&) const = default;
};

// Smallest coprime (nx, ny), both ≤ n_max, with nx·ωx = ny·ωy.  For identical
// parameters this is nx√|Ex| = ny√|Ey|.
std::optional<OrbitRatio> closed_orbit_condition(const SystemParams& sx, const SystemParams& sy,
                                                 double Ex, double Ey, int n_max);

struct LabelPair {
  int nx, ny;
  bool operator==(const LabelPair&) const = default;
};

enum class RelationTag { Permutation, Arithmetical };

struct PairRelation {
  LabelPair first, second;
  RelationTag tag;
};

struct EnergyClass {
  double energy;
  std::vector<LabelPair> members;
  std::vector<PairRelation> relations;  // one per unordered member pair
};

struct DegeneracyReport {
  std::vector<EnergyClass> classes;  // sorted by energy
  std::vector<PairRelation> arithmetical() const;
};

inline constexpr double kDegeneracyTolerance = 1e-12;

DegeneracyReport enumerate_degeneracies(const SystemParams& s, int n_max);

}  // namespace ghalab
