#include "ghalab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ghalab {

namespace {

using Mat = Eigen::MatrixXcd;

// Residual of an identity scaled by its largest term, so that the tolerance
// measures roundoff independently of the energy scale.
double scaled(const Mat& residual, std::initializer_list<const Mat*> terms, Eigen::Index cols) {
  double scale = 1.0;
  for (const Mat* t : terms) scale = std::max(scale, interior_max(*t, cols));
  return interior_max(residual, cols) / scale;
}

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }

// [D, X] for diagonal D, without dense products
Mat comm_diag(const Mat& D, const Mat& X) {
  const Eigen::VectorXcd d = D.diagonal();
  return d.asDiagonal() * X - X * d.asDiagonal();
}

constexpr double kExact = 1e-12;

}  // namespace

double ladder_k(const SystemParams& s, double n) {
  return s.is_well() ? n * n - 1.0 : n * (2.0 * s.p() - n);
}

double quantum_a(const SystemParams& s) {
  const double hb = s.hbar();
  if (s.is_well()) return s.alpha() * s.alpha() * hb * hb / 4.0;
  return -hb * hb * s.epsilon() * s.epsilon() / 4.0;
}

double quantum_b(const SystemParams& s) {
  if (s.is_well()) return 0.0;
  const double hb = s.hbar(), e = s.epsilon();
  return hb * hb * e * e * s.p() / 2.0;
}

double quantum_lambda(const SystemParams& s, double E) {
  const double hb = s.hbar();
  if (s.is_well()) {
    const double a = s.alpha();
    return a * hb * std::sqrt(E) + a * a * hb * hb / 4.0;
  }
  const double e = s.epsilon();
  return hb * e * std::sqrt(-E) - hb * hb * e * e / 4.0;
}

double quantum_delta(const SystemParams& s, double E) { return quantum_lambda(s, E) - 2.0 * quantum_a(s); }

double quantum_gamma1(const SystemParams& s, double E) {
  // (H − E_ground) / |a|: equals k(n) on Eₙ
  return (E - spectrum_1d(s, min_label(s))) / std::abs(quantum_a(s));
}

double quantum_gamma2(const SystemParams& s, double E) {
  // γ₁ evaluated one level up: k(n+1)
  return quantum_gamma1(s, E) + quantum_lambda(s, E) / std::abs(quantum_a(s));
}

std::vector<int> fock_labels(const SystemParams& s, int N) {
  if (s.is_well()) {
    if (N < 3) throw DimensionError("well truncation needs N >= 3, got " + std::to_string(N));
  } else {
    const int count = *bound_state_count(s);
    if (N != count)
      throw DimensionError("Morse truncation is fixed by the bound spectrum: N must be " + std::to_string(count) +
                           ", got " + std::to_string(N));
    if (N < 2) throw DimensionError("Morse system with fewer than two bound states has no ladder");
  }
  std::vector<int> labels(N);
  for (int i = 0; i < N; ++i) labels[i] = min_label(s) + i;
  return labels;
}

ResidualReport verify_gha_quantum(const SystemParams& s, int N) {
  const auto ops = build_operators(s, N);
  const auto sf = structure_functions(s, N);
  const Mat &H = ops.H.matrix, &Ap = ops.raise.matrix, &Am = ops.lower.matrix;
  const Mat &lam = sf.lambda.matrix, &g1 = sf.gamma1.matrix, &g2 = sf.gamma2.matrix, &del = sf.delta.matrix;
  const double a = quantum_a(s);
  // A⁻A⁺ reaches one level past the last basis vector
  const Eigen::Index inner = N - 1;

  const Mat HAp = comm(H, Ap), HAm = comm(H, Am), ApAm = comm(Ap, Am);
  const Mat Ap_lam = Ap * lam, del_Ap = del * Ap, lam_Am = lam * Am;
  const Mat g12 = g1 - g2, prod_pm = Ap * Am, prod_mp = Am * Ap;
  const Mat LAp = comm(lam, Ap), LAm = comm(lam, Am);
  const Mat aAp = 2.0 * a * Ap, aAm = 2.0 * a * Am;
  const Mat ApAp = comm(Ap, Ap);

  auto row = [&](const char* name, const Mat& lhs, const Mat& rhs) {
    return CheckResult{"quantum", name, scaled(lhs - rhs, {&lhs, &rhs}, inner), kExact};
  };
  return {
      row("[H,A+] - A+ lambda(H)", HAp, Ap_lam),
      row("[H,A+] - delta(H) A+", HAp, del_Ap),
      row("[H,A-] + lambda(H) A-", HAm, -lam_Am),
      row("[A+,A-] - (gamma1 - gamma2)(H)", ApAm, g12),
      row("A+ A- - gamma1(H)", prod_pm, g1),
      row("A- A+ - gamma2(H)", prod_mp, g2),
      row("[lambda(H),A+] - 2a A+", LAp, aAp),
      row("[lambda(H),A-] + 2a A-", LAm, -aAm),
      row("[A+,A+]", ApAp, Mat::Zero(N, N)),
  };
}

double su11_commutator_sign(const SystemParams& s, int N) {
  const auto ops = build_operators(s, N);
  const auto sf = structure_functions(s, N);
  const Mat C = comm(ops.raise.matrix, ops.lower.matrix);
  const Mat A0 = -sf.lambda.matrix / (2.0 * quantum_a(s));
  return -C(0, 0).real() / (2.0 * A0(0, 0).real());
}

ResidualReport su11_check(const SystemParams& s, int N) {
  const auto ops = build_operators(s, N);
  const auto sf = structure_functions(s, N);
  const double a = quantum_a(s);
  const Mat &Ap = ops.raise.matrix, &Am = ops.lower.matrix;
  const Mat A0 = -sf.lambda.matrix / (2.0 * a);
  const Eigen::Index inner = N - 1;
  const Mat c_p = comm(Ap, A0), c_m = comm(Am, A0), c_pm = comm(Ap, Am);
  const Mat two_A0 = 2.0 * A0;
  const Mat g12 = sf.gamma1.matrix - sf.gamma2.matrix, lam_a = sf.lambda.matrix / a;
  const Mat A0A0 = comm(A0, A0);
  auto row = [&](const char* name, const Mat& lhs, const Mat& rhs) {
    return CheckResult{"quantum", name, scaled(lhs - rhs, {&lhs, &rhs}, inner), kExact};
  };
  return {
      row("su11 [A+,A0] - A+", c_p, Ap),
      row("su11 [A-,A0] + A-", c_m, -Am),
      row("su11 [A+,A-] + 2A0", c_pm, -two_A0),
      row("su11 gamma1 - gamma2 - lambda/a", g12, lam_a),
      row("su11 [A0,A0]", A0A0, Mat::Zero(N, N)),
  };
}

double comipm_factor(const SystemParams& s, int k, int l, int nx, int ny) {
  const double a = quantum_a(s);
  const double lx = quantum_lambda(s, spectrum_formal(s, nx)), ly = quantum_lambda(s, spectrum_formal(s, ny));
  return k * (lx - a) - l * (ly - a) + a * (k * k + l * l);
}

ComipmReport comipm_check(const SystemParams& s, int N, int k, int l) {
  const auto two = build_2d(s, N, k, l);
  const Mat &H2 = two.H2.matrix, &Ip = two.Iplus.matrix, &Im = two.Iminus.matrix;
  const Eigen::Index full = H2.rows();
  const double a = quantum_a(s);

  Eigen::VectorXcd fp(full), fm(full);
  double route = 0.0, fscale = 1.0;
  for (int ix = 0; ix < N; ++ix)
    for (int iy = 0; iy < N; ++iy) {
      const int nx = two.labels[ix], ny = two.labels[iy];
      const double f = comipm_factor(s, k, l, nx, ny);
      const double raw = (spectrum_formal(s, nx + k) - spectrum_formal(s, nx)) +
                         (spectrum_formal(s, ny - l) - spectrum_formal(s, ny));
      const double scale = std::max({1.0, std::abs(f), std::abs(raw)});
      route = std::max(route, std::abs(f - raw) / scale);
      fscale = std::max(fscale, std::abs(f));
      fp(two.index(ix, iy)) = f;
      // I₋ moves |nx, ny⟩ to |nx−k, ny+l⟩; the factor is minus I₊'s at the image
      fm(two.index(ix, iy)) = -comipm_factor(s, k, l, nx - k, ny + l);
    }

  const Mat Cp = comm_diag(H2, Ip), Cm = comm_diag(H2, Im);
  const Mat Rp = Cp - Ip * fp.asDiagonal(), Rm = Cm - Im * fm.asDiagonal();
  const Mat IpF = Ip * fp.asDiagonal(), ImF = Im * fm.asDiagonal();
  const Eigen::Index inner = two.Iplus.interior_dim;

  // I₋ raises y: for the well only y-labels below the margin are trusted
  double rm = 0.0, sm = 1.0;
  for (int ix = 0; ix < N; ++ix)
    for (int iy = 0; iy < N; ++iy) {
      if (s.is_well() && iy >= N - l) continue;
      const Eigen::Index c = two.index(ix, iy);
      rm = std::max(rm, Rm.col(c).cwiseAbs().maxCoeff());
      sm = std::max({sm, Cm.col(c).cwiseAbs().maxCoeff(), ImF.col(c).cwiseAbs().maxCoeff()});
    }

  ComipmReport rep;
  double cscale = 1.0;
  for (Eigen::Index c = 0; c < inner; ++c) cscale = std::max(cscale, Cp.col(c).cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < inner; ++c) {
    const LabelPair q{two.labels[c / N], two.labels[c % N]};
    const bool maps_to_zero = Ip.col(c).cwiseAbs().maxCoeff() == 0.0;
    const bool f_zero = std::abs(fp(c).real()) <= 1e-10 * fscale;
    if (f_zero) rep.vanishing_predicted.push_back(q);
    if (maps_to_zero) {
      rep.annihilated.push_back(q);
    } else if (Cp.col(c).cwiseAbs().maxCoeff() <= kExact * cscale) {
      rep.vanishing_observed.push_back(q);
    }
  }

  // observed zeros must be exactly the predicted ones among non-annihilated states
  int mismatch = 0;
  for (const auto& q : rep.vanishing_predicted) {
    const bool ann = std::find(rep.annihilated.begin(), rep.annihilated.end(), q) != rep.annihilated.end();
    const bool obs = std::find(rep.vanishing_observed.begin(), rep.vanishing_observed.end(), q) !=
                     rep.vanishing_observed.end();
    if (!ann && !obs) ++mismatch;
  }
  for (const auto& q : rep.vanishing_observed)
    if (std::find(rep.vanishing_predicted.begin(), rep.vanishing_predicted.end(), q) ==
        rep.vanishing_predicted.end())
      ++mismatch;

  const Mat H2S = comm_diag(H2, two.S.matrix);
  const Mat adj = Im - Ip.adjoint();
  rep.checks = {
      {"quantum", "[H2,I+] - f I+", scaled(Rp, {&Cp, &IpF}, inner), kExact},
      {"quantum", "[H2,I-] - f' I-", rm / sm, kExact},
      {"quantum", "comipm factor: lambda route vs energy differences", route, kExact},
      {"quantum", "I- - adjoint(I+)", adj.cwiseAbs().maxCoeff(), kExact},
      {"quantum", "[H2,S]", scaled(H2S, {&H2}, full), kExact},
      {"quantum", "comipm vanishing set: predicted vs observed (mismatches)", static_cast<double>(mismatch), 0.0},
  };
  if (k == l && a != 0.0) {
    int off = 0;
    for (Eigen::Index c = 0; c < inner; ++c) {
      const int nx = two.labels[c / N], ny = two.labels[c % N];
      const bool f_zero = std::abs(fp(c).real()) <= 1e-10 * fscale;
      if (f_zero != (ny == nx + k)) ++off;
    }
    rep.checks.push_back(
        {"quantum", "comipm vanishing set equals {ny = nx + k} (mismatches)", static_cast<double>(off), 0.0});
  }
  return rep;
}

ResidualReport permutation_check(const SystemParams& s, int N) {
  const auto perm = permutation_operators(s, N);
  const auto two = build_2d(s, N, 1, 1);
  const Mat &H2 = two.H2.matrix, &Ip = perm.Iplus.matrix, &Im = perm.Iminus.matrix, &I3 = perm.I3.matrix;
  const Eigen::Index full = H2.rows();

  const Mat cp = comm_diag(H2, Ip), cm = comm_diag(H2, Im), c3 = comm_diag(H2, I3);
  const Mat su2 = comm(Ip, Im) - 2.0 * I3;
  const Mat r3p = comm(I3, Ip) - Ip, r3m = comm(I3, Im) + Im;
  const Mat adj = Im - Ip.adjoint();

  // transposition of every off-diagonal basis vector, and I₃ = ½ sign(nx − ny)
  double swap = 0.0, half = 0.0, i3 = 0.0;
  const Mat sum = Ip + Im;
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      const Eigen::Index src = two.index(j, k), dst = two.index(k, j);
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(full), t = Eigen::VectorXcd::Zero(full);
      e(src) = 1.0;
      if (j != k) t(dst) = 1.0;
      swap = std::max(swap, (sum.col(src) - t).cwiseAbs().maxCoeff());
      if (j != k) {
        const Mat& one = j < k ? Ip : Im;
        const Mat& other = j < k ? Im : Ip;
        half = std::max({half, (one.col(src) - t).cwiseAbs().maxCoeff(), other.col(src).cwiseAbs().maxCoeff()});
      }
      const double want = 0.5 * ((j > k) - (j < k));
      i3 = std::max(i3, (I3.col(src) - want * e).cwiseAbs().maxCoeff());
    }

  const Mat weighted = weighted_permutation_plus(s, N);
  const double weight_gap = (weighted - Ip).cwiseAbs().maxCoeff();

  return {
      {"quantum", "[H2,I+] (permutation)", scaled(cp, {&H2}, full), kExact},
      {"quantum", "[H2,I-] (permutation)", scaled(cm, {&H2}, full), kExact},
      {"quantum", "[H2,I3] (permutation)", scaled(c3, {&H2}, full), kExact},
      {"quantum", "I- - adjoint(I+) (permutation)", adj.cwiseAbs().maxCoeff(), kExact},
      {"quantum", "[I+,I-] - 2 I3", su2.cwiseAbs().maxCoeff(), kExact},
      {"quantum", "[I3,I+] - I+", r3p.cwiseAbs().maxCoeff(), kExact},
      {"quantum", "[I3,I-] + I-", r3m.cwiseAbs().maxCoeff(), kExact},
      {"quantum", "(I+ + I-)|j,k> = |k,j>", swap, kExact},
      {"quantum", "I+|j,k> = |k,j> (j<k), I-|j,k> = |k,j> (j>k)", half, kExact},
      {"quantum", "I3|j,k> = sign(j-k)/2 |j,k>", i3, kExact},
      {"quantum", "weighted ladder form - bare form", weight_gap, 1e-10},
  };
}

}  // namespace ghalab
