#pragma once

#include <utility>
#include <vector>

#include "cherncat/cyclic.hpp"

namespace cherncat {

/// Complex polynomial, coefficients lowest degree first; empty means zero.
struct Polynomial {
  std::vector<Cplx> coeffs;

  static Polynomial constant(const Cplx& v) {
    if (v == Cplx(0)) return {};
    return Polynomial{{v}};
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  Cplx eval(double t) const {
    Cplx out(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) out = out * t + coeffs[i];
    return out;
  }

  Polynomial derivative() const {
    Polynomial out;
    if (coeffs.size() < 2) return out;
    out.coeffs.resize(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i)
      out.coeffs[i - 1] = static_cast<double>(i) * coeffs[i];
    return out;
  }
};

inline Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Cplx(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  if (a.coeffs.empty() || b.coeffs.empty()) return out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Cplx(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return out;
}

/// Matrix of polynomials, row-major.
struct PolyMat {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Polynomial> entries;

  static PolyMat zero(Eigen::Index r, Eigen::Index c) {
    PolyMat out{r, c, {}};
    out.entries.resize(static_cast<std::size_t>(r * c));
    return out;
  }

  static PolyMat constant(const Mat& m) {
    PolyMat out{m.rows(), m.cols(), {}};
    out.entries.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) out.entries.push_back(Polynomial::constant(m(r, c)));
    return out;
  }

  const Polynomial& at(Eigen::Index r, Eigen::Index c) const {
    return entries[static_cast<std::size_t>(r * cols + c)];
  }
  Polynomial& at(Eigen::Index r, Eigen::Index c) {
    return entries[static_cast<std::size_t>(r * cols + c)];
  }

  Mat eval(double t) const {
    Mat out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = at(r, c).eval(t);
    return out;
  }

  PolyMat derivative() const {
    PolyMat out{rows, cols, {}};
    out.entries.reserve(entries.size());
    for (const Polynomial& p : entries) out.entries.push_back(p.derivative());
    return out;
  }

  int max_degree() const {
    int deg = -1;
    for (const Polynomial& p : entries) deg = std::max(deg, p.degree());
    return deg;
  }
};

inline PolyMat poly_mat_mul(const PolyMat& a, const PolyMat& b) {
  if (a.cols != b.rows) throw ShapeError("poly matrix product: shape mismatch");
  PolyMat out = PolyMat::zero(a.rows, b.cols);
  for (Eigen::Index r = 0; r < a.rows; ++r)
    for (Eigen::Index c = 0; c < b.cols; ++c) {
      Polynomial acc;
      for (Eigen::Index k = 0; k < a.cols; ++k) acc = poly_add(acc, poly_mul(a.at(r, k), b.at(k, c)));
      out.at(r, c) = std::move(acc);
    }
  return out;
}

/// Even blocks of a path value at one simple.
struct EvenPolyBlocks {
  PolyMat pp, mm;
};

/// Odd blocks of F_t at one simple: pm = Q_t (H- -> H+), mp = P_t (H+ -> H-).
struct OddPolyBlocks {
  PolyMat pm, mp;
};

/// Polynomial family of Fredholm modules over a fixed graded object and
/// algebra: per basis element the even blocks of rho_t, optionally the odd
/// blocks of F_t, over t in [0, t_end]. Scenario-supplied paths are capped at
/// polynomial degree 8; derived paths (conjugations) may exceed the cap.
struct OperatorPath {
  GradedHilbObject h;
  FiniteAlgebra algebra;
  double p = 2.0;
  std::vector<std::vector<EvenPolyBlocks>> rho_t;  // [basis element][simple]
  bool has_f_path = false;
  std::vector<OddPolyBlocks> f_t;                  // [simple], when has_f_path
  GradedOperator f_const;                          // used when !has_f_path
  double t_end = 1.0;

  void require_shape() const {
    h.validate();
    algebra.require_shape();
    if (rho_t.size() != static_cast<std::size_t>(algebra.dim()))
      throw ShapeError("path: one rho_t family per basis element required");
    for (const auto& fam : rho_t) {
      if (fam.size() != h.simple_count()) throw ShapeError("path: one rho_t block pair per simple required");
      for (std::size_t c = 0; c < fam.size(); ++c) {
        if (fam[c].pp.rows != h.plus.dims[c] || fam[c].pp.cols != h.plus.dims[c] ||
            fam[c].mm.rows != h.minus.dims[c] || fam[c].mm.cols != h.minus.dims[c])
          throw ShapeError("path: rho_t block shape mismatch");
      }
    }
    if (has_f_path) {
      if (f_t.size() != h.simple_count()) throw ShapeError("path: one f_t block pair per simple required");
      for (std::size_t c = 0; c < f_t.size(); ++c) {
        if (f_t[c].pm.rows != h.plus.dims[c] || f_t[c].pm.cols != h.minus.dims[c] ||
            f_t[c].mp.rows != h.minus.dims[c] || f_t[c].mp.cols != h.plus.dims[c])
          throw ShapeError("path: f_t block shape mismatch");
      }
    } else {
      if (!same_graded(f_const.h, h) || f_const.parity != Parity::odd)
        throw ShapeError("path: constant F missing or not odd");
    }
    if (!(t_end >= 0.0 && t_end <= 1.0)) throw DomainError("path: t_end must lie in [0, 1]");
  }

  void require_t(double t) const {
    if (t < 0.0 || t > t_end) throw DomainError("path: t outside [0, t_end]");
  }
};

/// Module at time t; Fredholm validity at sampled t is the caller's check.
inline FredholmModule eval_path(const OperatorPath& path, double t) {
  path.require_shape();
  path.require_t(t);
  FredholmModule fm;
  fm.h = path.h;
  fm.algebra = path.algebra;
  fm.p = path.p;
  fm.rho.reserve(path.rho_t.size());
  for (const auto& fam : path.rho_t) {
    std::vector<Mat> pps, mms;
    pps.reserve(fam.size());
    mms.reserve(fam.size());
    for (const auto& blocks : fam) {
      pps.push_back(blocks.pp.eval(t));
      mms.push_back(blocks.mm.eval(t));
    }
    fm.rho.push_back(make_even(path.h, std::move(pps), std::move(mms)));
  }
  if (path.has_f_path) {
    std::vector<Mat> pms, mps;
    pms.reserve(path.f_t.size());
    mps.reserve(path.f_t.size());
    for (const auto& blocks : path.f_t) {
      pms.push_back(blocks.pm.eval(t));
      mps.push_back(blocks.mp.eval(t));
    }
    fm.f_op = make_odd(path.h, std::move(pms), std::move(mps));
  } else {
    fm.f_op = path.f_const;
  }
  return fm;
}

/// delta_t: exact formal derivative of the rho_t polynomials, one even
/// operator per basis element.
inline std::vector<GradedOperator> path_derivative(const OperatorPath& path, double t) {
  path.require_shape();
  path.require_t(t);
  std::vector<GradedOperator> out;
  out.reserve(path.rho_t.size());
  for (const auto& fam : path.rho_t) {
    std::vector<Mat> pps, mms;
    pps.reserve(fam.size());
    mms.reserve(fam.size());
    for (const auto& blocks : fam) {
      pps.push_back(blocks.pp.derivative().eval(t));
      mms.push_back(blocks.mm.derivative().eval(t));
    }
    out.push_back(make_even(path.h, std::move(pps), std::move(mms)));
  }
  return out;
}

struct PathGridReport {
  double homomorphism_residual = 0.0;
  double f_square_residual = 0.0;
  double scale = 1.0;
  bool pass(double tol) const {
    return homomorphism_residual <= tol * scale && f_square_residual <= tol * scale;
  }
};

/// Homomorphism and F_t^2 = id residuals maximized over the sampling grid
/// {0, t_end/steps, ..., t_end}.
inline PathGridReport validate_path(const OperatorPath& path, int steps) {
  path.require_shape();
  if (steps < 1) throw DomainError("validate_path: steps must be positive");
  PathGridReport rep;
  for (int i = 0; i <= steps; ++i) {
    const double t = path.t_end * static_cast<double>(i) / static_cast<double>(steps);
    FredholmModule fm = eval_path(path, t);
    FredholmReport fr = validate_fredholm(fm);
    rep.homomorphism_residual = std::max(rep.homomorphism_residual, fr.homomorphism_residual);
    rep.f_square_residual = std::max(rep.f_square_residual, fr.f_square_residual);
    for (const auto& r : fm.rho) rep.scale = std::max(rep.scale, sup_operator_norm(r));
  }
  return rep;
}

namespace detail {

inline void require_constant_f(const OperatorPath& path) {
  if (path.has_f_path)
    throw DomainError("transgression requires the normalized constant-F form; apply normalize_conjugate first");
}

/// Per-node evaluation cache over the unitalized basis: index dim A is the
/// adjoined unit with rho = id, d rho = 0, delta = 0.
struct NodeOps {
  std::vector<GradedOperator> rho;    // du entries
  std::vector<GradedOperator> drho;   // du entries
  std::vector<GradedOperator> delta;  // du entries
};

inline NodeOps node_ops(const OperatorPath& path, const FredholmModule& fm, double t) {
  const int d = path.algebra.dim();
  NodeOps ops;
  ops.rho.reserve(static_cast<std::size_t>(d) + 1);
  ops.drho.reserve(static_cast<std::size_t>(d) + 1);
  ops.delta.reserve(static_cast<std::size_t>(d) + 1);
  std::vector<GradedOperator> delta = path_derivative(path, t);
  for (int i = 0; i < d; ++i) {
    ops.rho.push_back(fm.rho[static_cast<std::size_t>(i)]);
    ops.drho.push_back(d_op(fm, fm.rho[static_cast<std::size_t>(i)]));
    ops.delta.push_back(std::move(delta[static_cast<std::size_t>(i)]));
  }
  ops.rho.push_back(identity_operator(path.h));
  ops.drho.push_back(zero_operator(path.h, Parity::odd));
  ops.delta.push_back(zero_operator(path.h, Parity::even));
  return ops;
}

/// The integrand at one node: sum_{k=1}^{p+1} (-1)^{k-1}
/// Trace(eps rho_t(x0) w_1 ... w_{p+1}) with w_s = d rho_t(x_s) except slot k,
/// where w_k = delta_t(x_k). The d-slots use the calculus differential so the
/// identity B0(phi) = tau_l - tau_0 carries the same constants as the character.
inline Cplx density_from_ops(const GradedOperator& eps, const NodeOps& ops, const std::vector<int>& tuple) {
  const int p = static_cast<int>(tuple.size()) - 2;
  Cplx total(0);
  for (int k = 1; k <= p + 1; ++k) {
    GradedOperator op = ops.rho[static_cast<std::size_t>(tuple[0])];
    for (int s = 1; s <= p + 1; ++s) {
      const auto& factor = (s == k) ? ops.delta[static_cast<std::size_t>(tuple[s])]
                                    : ops.drho[static_cast<std::size_t>(tuple[s])];
      op = mul(op, factor);
    }
    total += (k % 2 == 1 ? 1.0 : -1.0) * total_trace(mul(eps, op));
  }
  return total;
}

}  // namespace detail

/// Density of the transgression at time t on one unitalized basis tuple of
/// length p+2.
inline Cplx transgression_density(const OperatorPath& path, double t, const std::vector<int>& tuple, int p) {
  if (p < 0 || p % 2 != 0) throw DomainError("transgression_density: p must be even and nonnegative");
  if (static_cast<int>(tuple.size()) != p + 2) throw ShapeError("transgression_density: tuple length must be p+2");
  detail::require_constant_f(path);
  path.require_shape();
  path.require_t(t);
  const int du = path.algebra.dim() + 1;
  for (int v : tuple)
    if (v < 0 || v >= du) throw DomainError("transgression_density: basis index out of range");
  FredholmModule fm = eval_path(path, t);
  detail::NodeOps ops = detail::node_ops(path, fm, t);
  return detail::density_from_ops(epsilon_operator(path.h), ops, tuple);
}

/// Composite-Simpson time integral of the density over [0, t_end], entrywise
/// over unitalized tuples, scaled by (2i pi)^m m!. Returns a degree p+1
/// cochain carrying its unital extension. Odd step counts round up.
inline CyclicCochain transgression_cochain(const OperatorPath& path, int p, int steps) {
  if (p < 0 || p % 2 != 0) throw DomainError("transgression_cochain: p must be even and nonnegative");
  if (steps < 2) throw DomainError("transgression_cochain: steps must be >= 2");
  detail::require_constant_f(path);
  path.require_shape();
  if (steps % 2 != 0) ++steps;
  const int m = p / 2;
  const int d = path.algebra.dim();
  const int du = d + 1;
  const Cplx pref = two_i_pi_pow(m) * factorial(m);

  CyclicCochain out = zero_cochain(path.algebra, p + 1);
  std::vector<Cplx> unital(out.expected_size(du), Cplx(0));
  if (path.t_end == 0.0) {
    out.unital_tensor = std::move(unital);
    return out;
  }

  const GradedOperator eps = epsilon_operator(path.h);
  const double h_step = path.t_end / static_cast<double>(steps);
  for (int node = 0; node <= steps; ++node) {
    const double t = path.t_end * static_cast<double>(node) / static_cast<double>(steps);
    const double weight = (node == 0 || node == steps) ? 1.0 : (node % 2 == 1 ? 4.0 : 2.0);
    FredholmModule fm = eval_path(path, t);
    detail::NodeOps ops = detail::node_ops(path, fm, t);
    parallel_for(unital.size(), [&](std::size_t flat) {
      std::vector<int> tuple(static_cast<std::size_t>(p) + 2);
      flat_to_tuple(flat, du, tuple);
      unital[flat] += weight * detail::density_from_ops(eps, ops, tuple);
    });
  }
  const Cplx factor = pref * (h_step / 3.0);
  for (Cplx& v : unital) v *= factor;

  std::vector<int> tuple(static_cast<std::size_t>(p) + 2);
  for (std::size_t flat = 0; flat < out.tensor.size(); ++flat) {
    flat_to_tuple(flat, d, tuple);
    out.tensor[flat] = unital[tuple_to_flat(tuple, du)];
  }
  out.unital_tensor = std::move(unital);
  return out;
}

struct HomotopyReport {
  double residual_transgression = 0.0;  // ||B0(phi) - (tau_l - tau_0)||_inf
  double residual_symmetrized = 0.0;    // ||(1+lambda+...)(tau_l - tau_0) - B(phi)||_inf
  double cohomologous_residual = 0.0;   // LS residual for S tau_l vs S tau_0
  bool cohomologous_decision = false;
  double scale = 1.0;
  int steps = 0;
  bool pass(double tol) const {
    return residual_transgression <= tol * scale && residual_symmetrized <= tol * scale &&
           cohomologous_decision;
  }
};

/// Certifies homotopy invariance along the path: the transgression identity,
/// its cyclic symmetrization, and class equality of S tau at the endpoints.
inline HomotopyReport homotopy_check(const OperatorPath& path, int p, int steps, double tol) {
  detail::require_constant_f(path);
  FredholmModule fm0 = eval_path(path, 0.0);
  FredholmModule fml = eval_path(path, path.t_end);
  CyclicCochain tau0 = chern_character(fm0, p);
  CyclicCochain taul = chern_character(fml, p);
  CyclicCochain diff = cochain_sub(taul, tau0);
  CyclicCochain phi = transgression_cochain(path, p, steps);

  HomotopyReport rep;
  rep.steps = steps;
  rep.scale = std::max({1.0, sup_abs(tau0), sup_abs(taul)});
  rep.residual_transgression = sup_abs(cochain_sub(b0_op(phi), diff));
  rep.residual_symmetrized = sup_abs(cochain_sub(cyclic_symmetrize(diff), big_b_op(phi)));
  CohomologousResult coh = cohomologous(s_operator(fml, p), s_operator(fm0, p), tol);
  rep.cohomologous_residual = coh.residual;
  rep.cohomologous_decision = coh.decision;
  return rep;
}

/// Conjugates by T_t = diag(id, Q_t), producing the constant normalized
/// symmetry F = antidiag(id, id) and rho blocks diag(rho_t^+, Q_t rho_t^- P_t).
/// Requires Q_t P_t = id within tol on the sampling grid; a numerically
/// singular P_t raises a singularity error naming t.
inline OperatorPath normalize_conjugate(const OperatorPath& path, int grid_steps, double tol) {
  path.require_shape();
  if (grid_steps < 1) throw DomainError("normalize_conjugate: grid steps must be positive");

  std::vector<OddPolyBlocks> f_t;
  if (path.has_f_path) {
    f_t = path.f_t;
  } else {
    f_t.reserve(path.h.simple_count());
    for (std::size_t c = 0; c < path.h.simple_count(); ++c)
      f_t.push_back({PolyMat::constant(path.f_const.blocks[c].pm), PolyMat::constant(path.f_const.blocks[c].mp)});
  }

  for (int i = 0; i <= grid_steps; ++i) {
    const double t = path.t_end * static_cast<double>(i) / static_cast<double>(grid_steps);
    for (std::size_t c = 0; c < f_t.size(); ++c) {
      const Mat q = f_t[c].pm.eval(t);
      const Mat pmat = f_t[c].mp.eval(t);
      if (pmat.size() > 0) {
        const RVec sv = singular_values(pmat);
        const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
        if (smin < 1e-12 * std::max(1.0, operator_norm(pmat)))
          throw SingularityError("normalize_conjugate: P_t singular at t = " + std::to_string(t));
      }
      const double res = std::max(
          operator_norm(q * pmat - Mat::Identity(q.rows(), q.rows())),
          operator_norm(pmat * q - Mat::Identity(pmat.rows(), pmat.rows())));
      if (res > tol)
        throw DomainError("normalize_conjugate: Q_t P_t deviates from id by " + std::to_string(res) +
                          " at t = " + std::to_string(t));
    }
  }

  OperatorPath out;
  out.h = path.h;
  out.algebra = path.algebra;
  out.p = path.p;
  out.t_end = path.t_end;
  out.has_f_path = false;
  std::vector<Mat> pms, mps;
  for (std::size_t c = 0; c < path.h.simple_count(); ++c) {
    pms.push_back(Mat::Identity(path.h.plus.dims[c], path.h.minus.dims[c]));
    mps.push_back(Mat::Identity(path.h.minus.dims[c], path.h.plus.dims[c]));
  }
  out.f_const = make_odd(path.h, std::move(pms), std::move(mps));
  out.rho_t.reserve(path.rho_t.size());
  for (const auto& fam : path.rho_t) {
    std::vector<EvenPolyBlocks> conj;
    conj.reserve(fam.size());
    for (std::size_t c = 0; c < fam.size(); ++c)
      conj.push_back({fam[c].pp, poly_mat_mul(poly_mat_mul(f_t[c].pm, fam[c].mm), f_t[c].mp)});
    out.rho_t.push_back(std::move(conj));
  }
  return out;
}

}  // namespace cherncat
