#pragma once

#include <numbers>
#include <vector>

#include "cherncat/cochain.hpp"
#include "cherncat/fredholm.hpp"
#include "cherncat/parallel.hpp"

namespace cherncat {

inline Cplx unit_imag_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Cplx(1, 0);
    case 1: return Cplx(0, 1);
    case 2: return Cplx(-1, 0);
    default: return Cplx(0, -1);
  }
}

inline double factorial(int m) {
  double out = 1.0;
  for (int i = 2; i <= m; ++i) out *= i;
  return out;
}

/// (2i pi)^m.
inline Cplx two_i_pi_pow(int m) {
  Cplx out(1, 0);
  const Cplx base(0, 2.0 * std::numbers::pi);
  for (int i = 0; i < m; ++i) out *= base;
  return out;
}

/// Element of the calculus: operator plus its Omega-degree; parity of the
/// operator equals degree mod 2.
struct OmegaElement {
  GradedOperator op;
  int degree = 0;
};

namespace detail {

/// Graded commutator [F, theta] = F theta - (-1)^{deg theta} theta F for a
/// homogeneous theta.
inline GradedOperator graded_commutator(const GradedOperator& f, const GradedOperator& theta, Parity parity) {
  const Cplx sign = (parity == Parity::even) ? Cplx(1) : Cplx(-1);
  return sub(mul(f, theta), scale(sign, mul(theta, f)));
}

}  // namespace detail

/// d(theta) = i [F, theta], graded; parity flips, mixed handled part-by-part.
inline GradedOperator d_op(const FredholmModule& fm, const GradedOperator& theta) {
  if (!same_graded(theta.h, fm.h)) throw ShapeError("d: object mismatch");
  const Cplx i_unit(0, 1);
  if (theta.parity != Parity::mixed) {
    GradedOperator out = scale(i_unit, detail::graded_commutator(fm.f_op, theta, theta.parity));
    out.parity = theta.parity == Parity::even ? Parity::odd : Parity::even;
    return out;
  }
  GradedOperator even = scale(i_unit, detail::graded_commutator(fm.f_op, theta.even_part(), Parity::even));
  even.parity = Parity::odd;
  GradedOperator odd = scale(i_unit, detail::graded_commutator(fm.f_op, theta.odd_part(), Parity::odd));
  odd.parity = Parity::even;
  return add(even, odd);
}

/// rho(a0) d rho(a1) ... d rho(aj) over unitalized basis indices
/// (index dim A = adjoined unit, rho(1) = id, d rho(1) = 0).
inline OmegaElement omega_word(const FredholmModule& fm, const std::vector<int>& tuple) {
  if (tuple.empty()) throw DomainError("omega_word: empty tuple");
  const GradedOperator id = identity_operator(fm.h);
  GradedOperator op = rho_basis(fm, tuple[0], id);
  for (std::size_t s = 1; s < tuple.size(); ++s)
    op = mul(op, d_op(fm, rho_basis(fm, tuple[s], id)));
  return OmegaElement{std::move(op), static_cast<int>(tuple.size()) - 1};
}

/// Trace(theta) = sum over simples of the full-block matrix trace.
inline Cplx total_trace(const GradedOperator& theta) {
  Cplx out(0);
  for (const auto& b : theta.blocks) out += b.pp.trace() + b.mm.trace();
  return out;
}

inline Cplx total_trace(const CatMorphism& f) {
  Cplx out(0);
  for (const Mat& b : f.blocks) {
    if (b.rows() != b.cols()) throw ShapeError("total_trace: non-square block");
    out += b.trace();
  }
  return out;
}

/// Tr_s(theta) = 1/2 Trace(eps F [F, theta]) with the graded commutator;
/// odd parts contribute zero identically, so mixed splits part-by-part.
inline Cplx supertrace(const FredholmModule& fm, const GradedOperator& theta) {
  if (!same_graded(theta.h, fm.h)) throw ShapeError("supertrace: object mismatch");
  const GradedOperator eps = epsilon_operator(fm.h);
  auto half_trace = [&](const GradedOperator& part, Parity parity) {
    return 0.5 * total_trace(mul(mul(eps, fm.f_op), detail::graded_commutator(fm.f_op, part, parity)));
  };
  if (theta.parity != Parity::mixed) return half_trace(theta, theta.parity);
  return half_trace(theta.even_part(), Parity::even) + half_trace(theta.odd_part(), Parity::odd);
}

/// Cycle integral of dimension n = 2m: (2i pi)^m m! Tr_s(w).
inline Cplx cycle_integral(const FredholmModule& fm, const OmegaElement& w, int m) {
  if (m < 0 || w.degree != 2 * m) throw DomainError("cycle_integral: degree must equal 2m");
  return two_i_pi_pow(m) * factorial(m) * supertrace(fm, w.op);
}

/// Character tau^n: dense tensor over A-basis tuples, with the unital
/// extension (unit -> identity) carried for B0.
inline CyclicCochain chern_character(const FredholmModule& fm, int n) {
  if (n < 0 || n % 2 != 0) throw DomainError("chern_character: degree must be even and nonnegative");
  fm.require_shape();
  const int m = n / 2;
  const int d = fm.algebra.dim();
  const int du = d + 1;
  const Cplx pref = two_i_pi_pow(m) * factorial(m);
  const GradedOperator id = identity_operator(fm.h);

  // d rho per unitalized basis index, computed once
  std::vector<GradedOperator> drho;
  drho.reserve(static_cast<std::size_t>(du));
  for (int i = 0; i < du; ++i) drho.push_back(d_op(fm, rho_basis(fm, i, id)));

  CyclicCochain out = zero_cochain(fm.algebra, n);
  std::vector<Cplx> unital(out.expected_size(du), Cplx(0));
  parallel_for(unital.size(), [&](std::size_t flat) {
    std::vector<int> tuple(static_cast<std::size_t>(n) + 1);
    flat_to_tuple(flat, du, tuple);
    GradedOperator op = rho_basis(fm, tuple[0], id);
    for (int s = 1; s <= n; ++s) op = mul(op, drho[static_cast<std::size_t>(tuple[s])]);
    unital[flat] = pref * supertrace(fm, op);
  });
  std::vector<int> tuple(static_cast<std::size_t>(n) + 1);
  for (std::size_t flat = 0; flat < out.tensor.size(); ++flat) {
    flat_to_tuple(flat, d, tuple);
    out.tensor[flat] = unital[tuple_to_flat(tuple, du)];
  }
  out.unital_tensor = std::move(unital);
  return out;
}

}  // namespace cherncat
