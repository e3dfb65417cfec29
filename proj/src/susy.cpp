#include "ghalab/susy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ghalab/fd_eigensolver.hpp"
#include "ghalab/quantum.hpp"

namespace ghalab {

namespace {

constexpr double pi = std::numbers::pi;

double l2_norm(const Eigen::ArrayXd& v, double h) {
  const Eigen::ArrayXd w = trapezoid_weights(static_cast<int>(v.size()));
  return std::sqrt(h * (w * v.square()).sum());
}

double l2_inner(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double h) {
  const Eigen::ArrayXd w = trapezoid_weights(static_cast<int>(a.size()));
  return h * (w * a * b).sum();
}

void require_morse(const SystemParams& s, const char* what) {
  if (!s.is_morse()) throw UnsupportedError(std::string(what) + " is defined for the Morse system only");
}

}  // namespace

Grid1D Grid1D::span(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw ArgumentError("grid needs n >= 2 and hi > lo");
  return {lo, (hi - lo) / (n - 1), n};
}

Grid2D Grid2D::staggered(double lo, double hi, int n) {
  const Grid1D xs = Grid1D::span(lo, hi, n);
  return {xs, {lo + 0.5 * xs.h, xs.h, n}};
}

Eigen::ArrayXd trapezoid_weights(int n) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Ones(n);
  if (n > 1) w(0) = w(n - 1) = 0.5;
  return w;
}

double Field1D::norm() const { return l2_norm(values, grid.h); }

// ---------------------------------------------------------------- eigenfunctions

Eigen::ArrayXd morse_eigenfunction_1d(const SystemParams& s, int n, const Eigen::ArrayXd& x) {
  require_morse(s, "morse_eigenfunction_1d");
  if (n < 0 || n > *max_label(s))
    throw DomainError("no bound state with label " + std::to_string(n) + " (largest is " +
                      std::to_string(*max_label(s)) + ")");
  const double p = s.p(), nu = s.nu(), b = s.beta();
  const double ex = p - n, alpha = 2.0 * ex;
  const double log_norm =
      0.5 * (std::log(b) + std::log(alpha) + std::lgamma(n + 1.0) - std::lgamma(2.0 * p - n + 1.0));
  Eigen::ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double log_xi = std::log(nu) - b * x(i);
    const double xi = std::exp(log_xi);
    // associated Laguerre polynomial L_n^{(alpha)}(ξ) by upward recurrence
    double l0 = 1.0, l1 = 1.0 + alpha - xi;
    double L = n == 0 ? l0 : l1;
    for (int k = 1; k < n; ++k) {
      const double l2 = ((2 * k + 1 + alpha - xi) * l1 - (k + alpha) * l0) / (k + 1);
      l0 = l1;
      l1 = l2;
      L = l2;
    }
    const double lg = log_norm + ex * log_xi - 0.5 * xi;
    out(i) = lg < -745.0 ? 0.0 : L * std::exp(lg);
  }
  return out;
}

std::pair<double, double> morse_domain(const SystemParams& s, int max_label_used, double threshold) {
  require_morse(s, "morse_domain");
  const double b = s.beta();
  double lo = -2.0 / b, hi = 12.0 / b;
  auto worst = [&](double x) {
    double w = 0.0;
    Eigen::ArrayXd pt(1);
    pt << x;
    for (int n = 0; n <= max_label_used; ++n) w = std::max(w, std::abs(morse_eigenfunction_1d(s, n, pt)(0)));
    return w;
  };
  for (int it = 0; it < 100000 && worst(hi) >= threshold; ++it) hi += 0.5 / b;
  for (int it = 0; it < 100000 && worst(lo) >= threshold; ++it) lo -= 0.25 / b;
  return {lo, hi};
}

bool GateReport::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const GateRow& r) {
    return r.relative_error < 1e-6 && r.overlap > 1.0 - 1e-8;
  });
}

GateReport morse_eigenfunction_gate(const SystemParams& s, int n_points) {
  require_morse(s, "morse_eigenfunction_gate");
  const int count = *bound_state_count(s);
  GateReport rep;
  if (count < 1) return rep;
  std::tie(rep.x_min, rep.x_max) = morse_domain(s, count - 1);
  const auto fd = fd_lowest_states([&s](double x) { return s.potential(x); }, s.mass(), s.hbar(), rep.x_min,
                                   rep.x_max, n_points, count);
  const Eigen::ArrayXd x = fd.x.array();
  for (int n = 0; n < count; ++n) {
    const Eigen::ArrayXd exact = morse_eigenfunction_1d(s, n, x);
    const Eigen::ArrayXd num = fd.states.col(n).array();
    GateRow row;
    row.n = n;
    row.exact_energy = spectrum_1d(s, n);
    row.fd_energy = fd.energies(n);
    row.relative_error = std::abs(row.fd_energy - row.exact_energy) / std::abs(row.exact_energy);
    row.overlap = std::abs((exact * num).sum()) / std::sqrt(exact.square().sum() * num.square().sum());
    const double floor = 1e-8 * num.abs().maxCoeff();
    int nodes = 0;
    double last = 0.0;
    for (Eigen::Index i = 0; i < num.size(); ++i) {
      if (std::abs(num(i)) < floor) continue;
      if (last != 0.0 && (num(i) > 0) != (last > 0)) ++nodes;
      last = num(i);
    }
    row.fd_nodes = nodes;
    rep.rows.push_back(row);
  }
  return rep;
}

std::pair<Field, Field> sym_antisym_state(const SystemParams& s, int n, int m, const Grid2D& g) {
  const Eigen::ArrayXd px = g.xs.points(), py = g.ys.points();
  const Eigen::VectorXd an = morse_eigenfunction_1d(s, n, px).matrix(), bn = morse_eigenfunction_1d(s, n, py).matrix();
  if (n == m) return {Field{g, (an * bn.transpose()).array()}, Field::zero(g)};
  const Eigen::VectorXd am = morse_eigenfunction_1d(s, m, px).matrix(), bm = morse_eigenfunction_1d(s, m, py).matrix();
  const Eigen::ArrayXXd a = (an * bm.transpose()).array(), b = (am * bn.transpose()).array();
  return {Field{g, (a + b) / std::sqrt(2.0)}, Field{g, (a - b) / std::sqrt(2.0)}};
}

Field product_state(const SystemParams& s, int n, int m, const Grid2D& g) {
  const Eigen::VectorXd a = morse_eigenfunction_1d(s, n, g.xs.points()).matrix();
  const Eigen::VectorXd b = morse_eigenfunction_1d(s, m, g.ys.points()).matrix();
  return {g, (a * b.transpose()).array()};
}

double diagonal_magnitude(const Field& f) {
  const double top = f.values.abs().maxCoeff();
  if (top == 0.0) return 0.0;
  const int n = f.grid.n();
  double worst = 0.0;
  // (i, i) sits at u = −h/2; (i+1, i) and (i, i−1) at u = +h/2 straddling it in v
  for (int i = 1; i + 1 < n; ++i) {
    const double est = 0.5 * (f.values(i, i) + 0.5 * (f.values(i + 1, i) + f.values(i, i - 1)));
    worst = std::max(worst, std::abs(est));
  }
  return worst / top;
}

// ---------------------------------------------------------------- operators

SusyOperators::SusyOperators(const SystemParams& s, const Grid2D& g, int accuracy, double chain_factor)
    : s_(s), g_(g), st_(central_stencil(accuracy)), chain_(chain_factor) {
  require_morse(s, "SusyOperators");
  const int n = g.n();
  vx_.resize(n);
  vy_.resize(n);
  for (int i = 0; i < n; ++i) {
    vx_(i) = s.potential(g.xs.x(i));
    vy_(i) = s.potential(g.ys.x(i));
  }
  const double b = s.beta(), hb = s.hbar(), m = s.mass();
  coth_.resize(n, n);
  barrier_.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double half = 0.5 * b * (g.xs.x(i) - g.ys.x(j));
      const double sh = std::sinh(half);
      coth_(i, j) = 1.0 / std::tanh(half);
      barrier_(i, j) = hb * hb / m * b * b / (2.0 * sh * sh);
    }
}

double SusyOperators::c() const {
  const double b = s_.beta(), hb = s_.hbar();
  return hb * hb * b * b / (2.0 * s_.mass());
}

Eigen::ArrayXXd SusyOperators::dx(const Eigen::ArrayXXd& f, const std::vector<double>& w) const {
  const Eigen::Index n = f.rows();
  const int r = st_.radius;
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(f.rows(), f.cols());
  for (int k = -r; k <= r; ++k) {
    const double wk = w[k + r];
    if (wk == 0.0) continue;
    const Eigen::Index lo = std::max<Eigen::Index>(0, -k), hi = std::min<Eigen::Index>(n, n - k);
    out.middleRows(lo, hi - lo) += wk * f.middleRows(lo + k, hi - lo);
  }
  return out;
}

Eigen::ArrayXXd SusyOperators::dy(const Eigen::ArrayXXd& f, const std::vector<double>& w) const {
  const Eigen::Index n = f.cols();
  const int r = st_.radius;
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(f.rows(), f.cols());
  for (int k = -r; k <= r; ++k) {
    const double wk = w[k + r];
    if (wk == 0.0) continue;
    const Eigen::Index lo = std::max<Eigen::Index>(0, -k), hi = std::min<Eigen::Index>(n, n - k);
    out.middleCols(lo, hi - lo) += wk * f.middleCols(lo + k, hi - lo);
  }
  return out;
}

void SusyOperators::require_vanishing_diagonal(const Field& f, const char* op) const {
  const double d = diagonal_magnitude(f);
  if (d > kDiagonalTolerance)
    throw SingularityError(std::string(op) + " needs a field vanishing on x = y; measured diagonal magnitude " +
                           std::to_string(d) + " of the field maximum");
}

Field SusyOperators::Hx(const Field& f) const {
  const double h = g_.h(), kin = s_.hbar() * s_.hbar() / (2.0 * s_.mass());
  return {g_, -kin / (h * h) * dx(f.values, st_.second) + f.values.colwise() * vx_};
}

Field SusyOperators::Hy(const Field& f) const {
  const double h = g_.h(), kin = s_.hbar() * s_.hbar() / (2.0 * s_.mass());
  return {g_, -kin / (h * h) * dy(f.values, st_.second) + f.values.rowwise() * vy_.transpose()};
}

Field SusyOperators::H(const Field& f) const {
  return {g_, Hx(f).values + Hy(f).values};
}

Field SusyOperators::barrier(const Field& f) const {
  require_vanishing_diagonal(f, "partner barrier");
  return {g_, barrier_ * f.values};
}

Field SusyOperators::Htilde(const Field& f) const {
  return {g_, H(f).values + barrier(f).values};
}

Field SusyOperators::D(int sign, const Field& f) const {
  require_vanishing_diagonal(f, "D");
  const double h = g_.h();
  const Eigen::ArrayXXd fx = dx(f.values, st_.first) / h, fy = dy(f.values, st_.first) / h;
  const Eigen::ArrayXXd d_minus = chain_ * (fx - fy), d_plus = chain_ * (fx + fy);
  const double k = s_.beta() * s_.hbar() * s_.hbar() / s_.mass();
  return {g_, c() * coth_ * f.values - sign * k * (d_minus + coth_ * d_plus)};
}

Field SusyOperators::Q(int sign, const Field& f) const {
  return {g_, -Hx(f).values + Hy(f).values + D(sign, f).values};
}

Field apply_H(const Field& f, const SystemParams& s) { return SusyOperators(s, f.grid).H(f); }
Field apply_Htilde(const Field& f, const SystemParams& s) { return SusyOperators(s, f.grid).Htilde(f); }
Field apply_D(int sign, const Field& f, const SystemParams& s) { return SusyOperators(s, f.grid).D(sign, f); }
Field supercharge_apply(int sign, const Field& f, const SystemParams& s) {
  return SusyOperators(s, f.grid).Q(sign, f);
}

double intertwining_residual(const SystemParams& s, int n, int m, const Grid2D& g, int accuracy) {
  if (n == m || std::abs(n - m) == 1)
    throw PreconditionError("intertwining check needs n != m and |n - m| != 1 (the partner state vanishes otherwise)");
  const SusyOperators ops(s, g, accuracy);
  const Field A = sym_antisym_state(s, n, m, g).second;
  const Field QA = ops.Q(+1, A);
  const Field lhs{g, ops.Htilde(QA).values - ops.Q(+1, ops.H(A)).values};
  return lhs.norm() / QA.norm();
}

double RefinementStudy::observed_order(std::size_t i) const {
  const double h0 = 1.0 / (points[i] - 1), h1 = 1.0 / (points[i + 1] - 1);
  return std::log(residuals[i] / residuals[i + 1]) / std::log(h0 / h1);
}

double RefinementStudy::order() const {
  const std::size_t last = points.size() - 1;
  const double h0 = 1.0 / (points[0] - 1), h1 = 1.0 / (points[last] - 1);
  return std::log(residuals[0] / residuals[last]) / std::log(h0 / h1);
}

Grid2D morse_grid_2d(const SystemParams& s, int max_label_used, int n) {
  const auto [lo, hi] = morse_domain(s, max_label_used);
  return Grid2D::staggered(lo, hi, n);
}

// ---------------------------------------------------------------- R and the theorem

double r_eigenvalue(const SystemParams& s, int n, int m) {
  require_morse(s, "r_eigenvalue");
  check_label(s, n);
  check_label(s, m);
  const double En = spectrum_formal(s, n);
  return (spectrum_formal(s, m + 1) - En) * (spectrum_formal(s, m - 1) - En);
}

double r_single_prefactor(const SystemParams& s, int n, int m) {
  require_morse(s, "r_single_prefactor");
  const double c = s.hbar() * s.hbar() * s.epsilon() * s.epsilon() / 4.0;
  const double d = m - n, t = 2.0 * s.p() - m - n;
  return c * (d * d - 1.0) * (t * t - 1.0);
}

RReport verify_R_on_grid(const SystemParams& s, int n, int m, const Grid2D& g, int accuracy) {
  const SusyOperators ops(s, g, accuracy);
  const double c = ops.c();
  RReport rep;
  rep.expected = r_eigenvalue(s, n, m);
  const double scale = std::max(std::abs(rep.expected), c * c);
  const double En = spectrum_1d(s, n), Em = spectrum_1d(s, m);
  rep.literal_rhs_eigenvalue = (En - Em) * (En - Em) + 2.0 * (En + Em) + 1.0;

  if (n != m) {
    const Field A = sym_antisym_state(s, n, m, g).second;
    const Field QA = ops.Q(+1, A);
    rep.q_plus_norm = QA.norm();
    if (std::abs(n - m) != 1) {
      const Field X = ops.Q(-1, QA);
      rep.has_composition = true;
      rep.composition_eigenvalue = inner(A, X) / inner(A, A);
      rep.composition_residual = Field{g, X.values - rep.expected * A.values}.norm() / (scale * A.norm());
    }
  }

  const Field P = product_state(s, n, m, g);
  const Field S{g, ops.Hx(P).values - ops.Hy(P).values};
  const Eigen::ArrayXXd S2 = ops.Hx(S).values - ops.Hy(S).values;
  const Field Y{g, S2 + 2.0 * c * ops.H(P).values + c * c * P.values};
  rep.rhs_eigenvalue = inner(P, Y) / inner(P, P);
  rep.rhs_residual = Field{g, Y.values - rep.expected * P.values}.norm() / (scale * P.norm());
  return rep;
}

bool TheoremReport::resolved() const {
  int hits = 0;
  for (int h : case_hits) hits += h;
  return std::all_of(arithmetical.begin(), arithmetical.end(), [](const ResolvedPair& r) { return r.separated; }) &&
         trivial_case_hits == hits && factorization_residual < 1e-9;
}

TheoremReport degeneracy_resolution_check(const SystemParams& s, int n_max) {
  require_morse(s, "degeneracy_resolution_check");
  const auto classes = enumerate_degeneracies(s, n_max);
  const double c = s.hbar() * s.hbar() * s.epsilon() * s.epsilon() / 4.0, p = s.p();
  TheoremReport rep;

  for (const auto& rel : classes.arithmetical()) {
    const double r1 = r_eigenvalue(s, rel.first.nx, rel.first.ny);
    const double r2 = r_eigenvalue(s, rel.second.nx, rel.second.ny);
    const double scale = std::max({std::abs(r1), std::abs(r2), c * c});
    const bool sep = std::abs(r1 - r2) > 1e-9 * scale;
    rep.arithmetical.push_back({rel.first, rel.second, r1, r2, sep});
    if (!sep)
      throw TheoremViolation("arithmetically degenerate pairs (" + std::to_string(rel.first.nx) + "," +
                             std::to_string(rel.first.ny) + ") and (" + std::to_string(rel.second.nx) + "," +
                             std::to_string(rel.second.ny) + ") share r = " + std::to_string(r1));
  }

  // replay the case analysis on every equal-energy couple of distinct label pairs
  for (int n1 = 0; n1 <= n_max; ++n1)
    for (int m1 = 0; m1 <= n_max; ++m1)
      for (int n2 = 0; n2 <= n_max; ++n2)
        for (int m2 = 0; m2 <= n_max; ++m2) {
          if (n1 == n2 && m1 == m2) continue;
          const double E1 = spectrum_1d(s, n1) + spectrum_1d(s, m1), E2 = spectrum_1d(s, n2) + spectrum_1d(s, m2);
          if (std::abs(E1 - E2) > kDegeneracyTolerance * std::max(std::abs(E1), std::abs(E2))) continue;
          ++rep.equal_energy_pairs;
          const double r1 = r_eigenvalue(s, n1, m1), r2 = r_eigenvalue(s, n2, m2);
          const std::array<double, 4> f{double(m2 - m1), double(n2 - m1), 2 * p - m1 - m2, 2 * p - m1 - n2};
          const double predicted = 4.0 * c * c * f[0] * f[1] * f[2] * f[3];
          const double scale = std::max({std::abs(r1), std::abs(r2), c * c});
          rep.factorization_residual = std::max(rep.factorization_residual, std::abs(r1 - r2 - predicted) / scale);
          const bool transposed = n1 == m2 && m1 == n2;
          for (int k = 0; k < 4; ++k)
            if (std::abs(f[k]) < 1e-9) {
              ++rep.case_hits[k];
              if (transposed) ++rep.trivial_case_hits;
            }
        }
  return rep;
}

// ---------------------------------------------------------------- position-space ladders

Field1D well_eigenfunction_1d(const SystemParams& s, int n, const Grid1D& g) {
  check_label(s, n);
  const double L = s.length();
  const Eigen::ArrayXd x = g.points();
  return {g, std::sqrt(2.0 / L) * (n * pi * (x / L + 0.5)).sin()};
}

Grid1D well_grid(const SystemParams& s, double h) {
  const double L = s.length();
  const int n = static_cast<int>(std::lround(L / h)) + 1;
  return Grid1D::span(-0.5 * L, 0.5 * L, n);
}

Grid1D morse_grid_1d(const SystemParams& s, int max_label_used, double h) {
  const auto [lo, hi] = morse_domain(s, max_label_used);
  const int n = static_cast<int>(std::ceil((hi - lo) / h)) + 1;
  return Grid1D::span(lo, hi, n);
}

Field1D position_ladder(const SystemParams& s, int n, const Grid1D& g, LadderDirection dir, int accuracy) {
  const auto st = central_stencil(accuracy);
  const Eigen::ArrayXd x = g.points();
  if (s.is_well()) {
    check_label(s, n);
    const double L = s.length();
    const Eigen::ArrayXd psi = well_eigenfunction_1d(s, n, g).values;
    const Eigen::ArrayXd dpsi = apply_stencil(psi, st.first, 1.0 / g.h, StencilBoundary::OddAboutEnds);
    const Eigen::ArrayXd cu = (pi * x / L).cos(), su = (pi * x / L).sin();
    // cos(πx/L)·P ordering with the level label n in place of the number operator
    if (dir == LadderDirection::Lower)
      return {g, std::sqrt(1.0 - 1.0 / (double(n) * n)) * (-(L / pi) * cu * dpsi - n * su * psi)};
    return {g, std::sqrt(1.0 + 2.0 / n) * ((L / pi) * cu * dpsi - n * su * psi)};
  }

  const double p = s.p(), b = s.beta();
  if (n < 0 || n > *max_label(s)) throw DomainError("no bound state with label " + std::to_string(n));
  const Eigen::ArrayXd psi = morse_eigenfunction_1d(s, n, x);
  // e^{βx} amplifies any edge error, so no zero padding beyond the grid
  const Eigen::ArrayXd dpsi = differentiate(psi, g.h, 1, accuracy);
  const Eigen::ArrayXd ebx = (b * x).exp();
  const double d = p - n;
  if (dir == LadderDirection::Lower) {
    if (std::abs(2.0 * p - 2.0 * n) < 1e-12)
      throw DomainError("lowering normalization K(n) has a pole at n = p");
    const double K = (2 * p - n) * (2 * p - 2 * n + 2) / ((2 * p - n + 1) * (2 * p - 2 * n));
    const double coef = (2 * p - 2 * n + 1) / ((2 * p + 1) * b);
    return {g, std::sqrt(K) * (coef * ebx * (dpsi + b * d * psi) - (p + 0.5) * psi)};
  }
  if (n + 1 > *max_label(s)) throw DomainError("no bound state above label " + std::to_string(n));
  const double R = (2 * p - n) * d / ((2 * p - n - 1) * (d - 1));
  const double coef = (2 * p - 2 * n - 1) / ((2 * p + 1) * b);
  return {g, (coef * ebx * (-dpsi + b * d * psi) - (p + 0.5) * psi) / std::sqrt(R)};
}

LadderCheck quantum_ladder_position_check(const SystemParams& s, int n, const Grid1D& g, LadderDirection dir,
                                          int accuracy) {
  const Field1D applied = position_ladder(s, n, g, dir, accuracy);
  const Eigen::ArrayXd x = g.points();
  auto eigen = [&](int label) -> Eigen::ArrayXd {
    return s.is_well() ? well_eigenfunction_1d(s, label, g).values : morse_eigenfunction_1d(s, label, x);
  };
  Eigen::ArrayXd target = Eigen::ArrayXd::Zero(g.n);
  if (dir == LadderDirection::Lower) {
    if (n > min_label(s)) target = std::sqrt(ladder_k(s, n)) * eigen(n - 1);
  } else {
    target = std::sqrt(ladder_k(s, n + 1)) * eigen(n + 1);
  }
  LadderCheck out;
  out.applied_norm = applied.norm();
  out.target_norm = l2_norm(target, g.h);
  if (out.target_norm == 0.0) {
    out.residual = out.applied_norm;
    out.overlap = out.applied_norm == 0.0 ? 1.0 : 0.0;
  } else {
    out.residual = l2_norm(applied.values - target, g.h) / out.target_norm;
    out.overlap = l2_inner(applied.values, target, g.h) / (out.applied_norm * out.target_norm);
  }
  return out;
}

}  // namespace ghalab
