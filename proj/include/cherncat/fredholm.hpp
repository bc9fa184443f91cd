#pragma once

#include <array>
#include <vector>

#include "cherncat/algebra.hpp"
#include "cherncat/category.hpp"

namespace cherncat {

/// H = H+ (+) H-: two Hilb(X) objects over the same context.
struct GradedHilbObject {
  HilbObject plus;
  HilbObject minus;

  void validate() const {
    plus.validate();
    minus.validate();
    if (!same_context(plus.ctx, minus.ctx)) throw ShapeError("graded object: mixed contexts");
    if (plus.dims.size() != minus.dims.size()) throw ShapeError("graded object: simple count mismatch");
  }
  std::size_t simple_count() const { return plus.dims.size(); }
};

inline bool same_graded(const GradedHilbObject& a, const GradedHilbObject& b) {
  return same_object(a.plus, b.plus) && same_object(a.minus, b.minus);
}

enum class Parity { even, odd, mixed };

/// Per-simple blocks of an operator on H: pp: H+ -> H+, mm: H- -> H-,
/// pm: H- -> H+, mp: H+ -> H-. Even operators carry pp/mm, odd ones pm/mp;
/// all four are stored so products reduce to block arithmetic.
struct GradedBlocks {
  Mat pp, mm, pm, mp;
};

struct GradedOperator {
  GradedHilbObject h;
  Parity parity = Parity::even;
  std::vector<GradedBlocks> blocks;  // one per simple

  GradedOperator even_part() const;
  GradedOperator odd_part() const;
};

inline GradedOperator zero_operator(const GradedHilbObject& h, Parity parity = Parity::even) {
  GradedOperator out{h, parity, {}};
  out.blocks.reserve(h.simple_count());
  for (std::size_t c = 0; c < h.simple_count(); ++c) {
    const Eigen::Index dp = h.plus.dims[c], dm = h.minus.dims[c];
    out.blocks.push_back({Mat::Zero(dp, dp), Mat::Zero(dm, dm), Mat::Zero(dp, dm), Mat::Zero(dm, dp)});
  }
  return out;
}

inline GradedOperator identity_operator(const GradedHilbObject& h) {
  GradedOperator out = zero_operator(h, Parity::even);
  for (std::size_t c = 0; c < h.simple_count(); ++c) {
    out.blocks[c].pp = Mat::Identity(h.plus.dims[c], h.plus.dims[c]);
    out.blocks[c].mm = Mat::Identity(h.minus.dims[c], h.minus.dims[c]);
  }
  return out;
}

/// The grading: +id on H+, -id on H-.
inline GradedOperator epsilon_operator(const GradedHilbObject& h) {
  GradedOperator out = identity_operator(h);
  for (auto& b : out.blocks) b.mm = -b.mm;
  return out;
}

inline GradedOperator make_even(const GradedHilbObject& h, std::vector<Mat> pps, std::vector<Mat> mms) {
  GradedOperator out = zero_operator(h, Parity::even);
  if (pps.size() != h.simple_count() || mms.size() != h.simple_count())
    throw ShapeError("make_even: one block pair per simple required");
  for (std::size_t c = 0; c < h.simple_count(); ++c) {
    if (pps[c].rows() != h.plus.dims[c] || pps[c].cols() != h.plus.dims[c] ||
        mms[c].rows() != h.minus.dims[c] || mms[c].cols() != h.minus.dims[c])
      throw ShapeError("make_even: block shape mismatch");
    out.blocks[c].pp = std::move(pps[c]);
    out.blocks[c].mm = std::move(mms[c]);
  }
  return out;
}

inline GradedOperator make_odd(const GradedHilbObject& h, std::vector<Mat> pms, std::vector<Mat> mps) {
  GradedOperator out = zero_operator(h, Parity::odd);
  if (pms.size() != h.simple_count() || mps.size() != h.simple_count())
    throw ShapeError("make_odd: one block pair per simple required");
  for (std::size_t c = 0; c < h.simple_count(); ++c) {
    if (pms[c].rows() != h.plus.dims[c] || pms[c].cols() != h.minus.dims[c] ||
        mps[c].rows() != h.minus.dims[c] || mps[c].cols() != h.plus.dims[c])
      throw ShapeError("make_odd: block shape mismatch");
    out.blocks[c].pm = std::move(pms[c]);
    out.blocks[c].mp = std::move(mps[c]);
  }
  return out;
}

inline GradedOperator GradedOperator::even_part() const {
  GradedOperator out = zero_operator(h, Parity::even);
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    out.blocks[c].pp = blocks[c].pp;
    out.blocks[c].mm = blocks[c].mm;
  }
  return out;
}

inline GradedOperator GradedOperator::odd_part() const {
  GradedOperator out = zero_operator(h, Parity::odd);
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    out.blocks[c].pm = blocks[c].pm;
    out.blocks[c].mp = blocks[c].mp;
  }
  return out;
}

inline Parity sum_parity(Parity a, Parity b) {
  if (a == b) return a;
  return Parity::mixed;
}

inline Parity product_parity(Parity a, Parity b) {
  if (a == Parity::mixed || b == Parity::mixed) return Parity::mixed;
  return a == b ? Parity::even : Parity::odd;
}

inline GradedOperator add(const GradedOperator& a, const GradedOperator& b) {
  if (!same_graded(a.h, b.h)) throw ShapeError("graded add: object mismatch");
  GradedOperator out = a;
  out.parity = sum_parity(a.parity, b.parity);
  for (std::size_t c = 0; c < out.blocks.size(); ++c) {
    out.blocks[c].pp += b.blocks[c].pp;
    out.blocks[c].mm += b.blocks[c].mm;
    out.blocks[c].pm += b.blocks[c].pm;
    out.blocks[c].mp += b.blocks[c].mp;
  }
  return out;
}

inline GradedOperator sub(const GradedOperator& a, const GradedOperator& b) {
  if (!same_graded(a.h, b.h)) throw ShapeError("graded sub: object mismatch");
  GradedOperator out = a;
  out.parity = sum_parity(a.parity, b.parity);
  for (std::size_t c = 0; c < out.blocks.size(); ++c) {
    out.blocks[c].pp -= b.blocks[c].pp;
    out.blocks[c].mm -= b.blocks[c].mm;
    out.blocks[c].pm -= b.blocks[c].pm;
    out.blocks[c].mp -= b.blocks[c].mp;
  }
  return out;
}

inline GradedOperator scale(const Cplx& s, const GradedOperator& a) {
  GradedOperator out = a;
  for (auto& b : out.blocks) {
    b.pp *= s;
    b.mm *= s;
    b.pm *= s;
    b.mp *= s;
  }
  return out;
}

/// Block product; parity tracked by the usual table, with mixed absorbing.
inline GradedOperator mul(const GradedOperator& a, const GradedOperator& b) {
  if (!same_graded(a.h, b.h)) throw ShapeError("graded mul: object mismatch");
  GradedOperator out = zero_operator(a.h, product_parity(a.parity, b.parity));
  for (std::size_t c = 0; c < out.blocks.size(); ++c) {
    const GradedBlocks& x = a.blocks[c];
    const GradedBlocks& y = b.blocks[c];
    out.blocks[c].pp = x.pp * y.pp + x.pm * y.mp;
    out.blocks[c].pm = x.pp * y.pm + x.pm * y.mm;
    out.blocks[c].mp = x.mp * y.pp + x.mm * y.mp;
    out.blocks[c].mm = x.mp * y.pm + x.mm * y.mm;
  }
  return out;
}

/// Full-space morphism view for the norm helpers: per simple, the operator on
/// H+(c) (+) H-(c) as one matrix.
inline CatMorphism flatten(const GradedOperator& a) {
  HilbObject total{a.h.plus.ctx, {}};
  total.dims.reserve(a.h.simple_count());
  for (std::size_t c = 0; c < a.h.simple_count(); ++c)
    total.dims.push_back(a.h.plus.dims[c] + a.h.minus.dims[c]);
  CatMorphism out{total, total, {}};
  out.blocks.reserve(a.blocks.size());
  for (std::size_t c = 0; c < a.blocks.size(); ++c) {
    const Eigen::Index dp = a.h.plus.dims[c], dm = a.h.minus.dims[c];
    Mat full(dp + dm, dp + dm);
    full.topLeftCorner(dp, dp) = a.blocks[c].pp;
    full.topRightCorner(dp, dm) = a.blocks[c].pm;
    full.bottomLeftCorner(dm, dp) = a.blocks[c].mp;
    full.bottomRightCorner(dm, dm) = a.blocks[c].mm;
    out.blocks.push_back(std::move(full));
  }
  return out;
}

inline double sup_operator_norm(const GradedOperator& a) { return sup_operator_norm(flatten(a)); }
inline double sup_schatten_norm(const GradedOperator& a, double p) { return sup_schatten_norm(flatten(a), p); }

/// Fredholm module data: graded object, algebra, even representation per basis
/// element, odd symmetry F, and the declared summability exponent p. At finite
/// dimension p only labels which characters the CLI offers by default.
struct FredholmModule {
  GradedHilbObject h;
  FiniteAlgebra algebra;
  std::vector<GradedOperator> rho;  // one even operator per basis element
  GradedOperator f_op;              // odd
  double p = 2.0;

  void require_shape() const {
    h.validate();
    algebra.require_shape();
    if (rho.size() != static_cast<std::size_t>(algebra.dim()))
      throw ShapeError("module: one rho block per basis element required");
    for (const auto& r : rho) {
      if (!same_graded(r.h, h)) throw ShapeError("module: rho object mismatch");
      if (r.parity != Parity::even) throw ShapeError("module: rho must be even");
    }
    if (!same_graded(f_op.h, h)) throw ShapeError("module: F object mismatch");
    if (f_op.parity != Parity::odd) throw ShapeError("module: F must be odd");
    if (!(p >= 1.0)) throw DomainError("module: summability exponent must be >= 1");
  }
};

/// rho extended to the unitalization: coordinates over A plus a unit weight.
inline GradedOperator apply_rho(const FredholmModule& fm, const Element& coords, const Cplx& unit_coord = Cplx(0)) {
  if (coords.size() != fm.algebra.dim()) throw ShapeError("apply_rho: coordinate length mismatch");
  GradedOperator out = zero_operator(fm.h, Parity::even);
  for (int i = 0; i < fm.algebra.dim(); ++i)
    if (coords(i) != Cplx(0)) out = add(out, scale(coords(i), fm.rho[i]));
  if (unit_coord != Cplx(0)) out = add(out, scale(unit_coord, identity_operator(fm.h)));
  return out;
}

/// Basis-indexed rho with the unitalized convention: index dim(A) is the
/// adjoined unit and maps to the identity operator.
inline const GradedOperator& rho_basis(const FredholmModule& fm, int idx, const GradedOperator& identity_cache) {
  if (idx == fm.algebra.dim()) return identity_cache;
  return fm.rho.at(static_cast<std::size_t>(idx));
}

struct FredholmReport {
  double f_square_residual = 0.0;
  double f_grading_residual = 0.0;  // ||F eps + eps F||
  double homomorphism_residual = 0.0;
  std::vector<double> commutator_schatten;  // ||[F, rho(e_i)]||_p per basis element
  bool pass(double tol) const {
    return f_square_residual <= tol && f_grading_residual <= tol && homomorphism_residual <= tol;
  }
};

inline FredholmReport validate_fredholm(const FredholmModule& fm) {
  fm.require_shape();
  FredholmReport rep;
  const GradedOperator id = identity_operator(fm.h);
  const GradedOperator eps = epsilon_operator(fm.h);
  rep.f_square_residual = sup_operator_norm(sub(mul(fm.f_op, fm.f_op), id));
  rep.f_grading_residual = sup_operator_norm(add(mul(fm.f_op, eps), mul(eps, fm.f_op)));
  const int d = fm.algebra.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      GradedOperator expect = zero_operator(fm.h, Parity::even);
      for (int k = 0; k < d; ++k)
        if (fm.algebra.c(i, j, k) != Cplx(0)) expect = add(expect, scale(fm.algebra.c(i, j, k), fm.rho[k]));
      const double res = sup_operator_norm(sub(mul(fm.rho[i], fm.rho[j]), expect));
      rep.homomorphism_residual = std::max(rep.homomorphism_residual, res);
    }
  rep.commutator_schatten.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    GradedOperator comm = sub(mul(fm.f_op, fm.rho[i]), mul(fm.rho[i], fm.f_op));
    rep.commutator_schatten.push_back(sup_schatten_norm(comm, fm.p));
  }
  return rep;
}

}  // namespace cherncat
