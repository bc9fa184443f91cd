#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cherncat/algebra.hpp"

namespace cherncat {

/// Dense degree-k cochain: complex values over (k+1)-tuples of A-basis indices,
/// flattened row-major (last slot fastest). Cochains produced by the character
/// and the transgression additionally carry the tensor extended over the
/// unitalization (unit index = dim A), which is what B0 consumes.
struct CyclicCochain {
  FiniteAlgebra algebra;
  int degree = 0;
  std::vector<Cplx> tensor;                         // (dim A)^(degree+1) entries
  std::optional<std::vector<Cplx>> unital_tensor;   // (dim A + 1)^(degree+1) entries

  int slots() const { return degree + 1; }

  std::size_t expected_size(int base) const {
    std::size_t out = 1;
    for (int s = 0; s < slots(); ++s) out *= static_cast<std::size_t>(base);
    return out;
  }

  void require_shape() const {
    algebra.require_shape();
    if (degree < 0) throw DomainError("cochain: negative degree");
    if (tensor.size() != expected_size(algebra.dim())) throw ShapeError("cochain: tensor size mismatch");
    if (unital_tensor && unital_tensor->size() != expected_size(algebra.dim() + 1))
      throw ShapeError("cochain: unital tensor size mismatch");
    for (const Cplx& v : tensor)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("cochain: non-finite entry");
  }
};

/// Row-major multi-index helpers over a fixed base.
inline std::size_t tuple_to_flat(const std::vector<int>& tuple, int base) {
  std::size_t flat = 0;
  for (int v : tuple) flat = flat * static_cast<std::size_t>(base) + static_cast<std::size_t>(v);
  return flat;
}

inline void flat_to_tuple(std::size_t flat, int base, std::vector<int>& tuple) {
  for (std::size_t s = tuple.size(); s-- > 0;) {
    tuple[s] = static_cast<int>(flat % static_cast<std::size_t>(base));
    flat /= static_cast<std::size_t>(base);
  }
}

inline CyclicCochain zero_cochain(const FiniteAlgebra& a, int degree) {
  CyclicCochain out{a, degree, {}, std::nullopt};
  out.tensor.assign(out.expected_size(a.dim()), Cplx(0));
  return out;
}

inline double sup_abs(const std::vector<Cplx>& v) {
  double out = 0.0;
  for (const Cplx& x : v) out = std::max(out, std::abs(x));
  return out;
}

inline double sup_abs(const CyclicCochain& c) { return sup_abs(c.tensor); }

inline CyclicCochain cochain_sub(const CyclicCochain& a, const CyclicCochain& b) {
  if (a.degree != b.degree || a.tensor.size() != b.tensor.size())
    throw ShapeError("cochain sub: degree mismatch");
  CyclicCochain out = a;
  out.unital_tensor.reset();
  for (std::size_t i = 0; i < out.tensor.size(); ++i) out.tensor[i] -= b.tensor[i];
  return out;
}

inline CyclicCochain cochain_scale(const Cplx& s, const CyclicCochain& a) {
  CyclicCochain out = a;
  out.unital_tensor.reset();
  for (Cplx& v : out.tensor) v *= s;
  return out;
}

/// lambda_k(psi)(x0,...,xk) = (-1)^k psi(x1,...,xk,x0).
inline CyclicCochain lambda_op(const CyclicCochain& psi) {
  psi.require_shape();
  const int d = psi.algebra.dim();
  const int k = psi.degree;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  CyclicCochain out = zero_cochain(psi.algebra, k);
  std::vector<int> tuple(psi.slots());
  std::vector<int> rotated(psi.slots());
  for (std::size_t flat = 0; flat < out.tensor.size(); ++flat) {
    flat_to_tuple(flat, d, tuple);
    for (int s = 0; s < k; ++s) rotated[s] = tuple[s + 1];
    rotated[k] = tuple[0];
    out.tensor[flat] = sign * psi.tensor[tuple_to_flat(rotated, d)];
  }
  return out;
}

/// (1 + lambda + ... + lambda^k) for a degree-k input: the full signed cyclic
/// symmetrization. Fixes cyclic cochains up to the factor k+1.
inline CyclicCochain cyclic_symmetrize(const CyclicCochain& psi) {
  CyclicCochain acc = psi;
  acc.unital_tensor.reset();
  CyclicCochain cur = psi;
  for (int j = 0; j < psi.degree; ++j) {
    cur = lambda_op(cur);
    for (std::size_t i = 0; i < acc.tensor.size(); ++i) acc.tensor[i] += cur.tensor[i];
  }
  return acc;
}

/// Hochschild coboundary: degree k -> k+1 via the alternating sum of slot
/// multiplications, closing with (-1)^{k+1} psi(x_{k+1} x_0, ..., x_k).
inline CyclicCochain hochschild_b(const CyclicCochain& psi) {
  psi.require_shape();
  const int d = psi.algebra.dim();
  const int k = psi.degree;
  CyclicCochain out = zero_cochain(psi.algebra, k + 1);
  std::vector<int> tuple(k + 2);
  std::vector<int> inner(k + 1);
  for (std::size_t flat = 0; flat < out.tensor.size(); ++flat) {
    flat_to_tuple(flat, d, tuple);
    Cplx v(0);
    for (int i = 0; i <= k; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      // slot i of the inner tuple receives the product x_i x_{i+1}
      for (int s = 0; s < i; ++s) inner[s] = tuple[s];
      for (int s = i + 1; s <= k; ++s) inner[s] = tuple[s + 1];
      for (int m = 0; m < d; ++m) {
        const Cplx w = psi.algebra.c(tuple[i], tuple[i + 1], m);
        if (w == Cplx(0)) continue;
        inner[i] = m;
        v += sign * w * psi.tensor[tuple_to_flat(inner, d)];
      }
    }
    const double closing = ((k + 1) % 2 == 0) ? 1.0 : -1.0;
    for (int s = 1; s <= k; ++s) inner[s] = tuple[s];
    for (int m = 0; m < d; ++m) {
      const Cplx w = psi.algebra.c(tuple[k + 1], tuple[0], m);
      if (w == Cplx(0)) continue;
      inner[0] = m;
      v += closing * w * psi.tensor[tuple_to_flat(inner, d)];
    }
    out.tensor[flat] = v;
  }
  return out;
}

/// B0(psi)(a0...a_{k-1}) = psi(1, a0, ..., a_{k-1}) - psi(a0, ..., a_{k-1}, 1).
/// Requires the unital extension carried by character/transgression cochains.
inline CyclicCochain b0_op(const CyclicCochain& psi) {
  psi.require_shape();
  if (!psi.unital_tensor)
    throw DomainError("b0: cochain carries no unital evaluation rule");
  if (psi.degree == 0) throw DomainError("b0: no degree -1 cochains");
  const int d = psi.algebra.dim();
  const int du = d + 1;  // unit index = d
  CyclicCochain out = zero_cochain(psi.algebra, psi.degree - 1);
  std::vector<int> tuple(out.slots());
  std::vector<int> extended(psi.slots());
  for (std::size_t flat = 0; flat < out.tensor.size(); ++flat) {
    flat_to_tuple(flat, d, tuple);
    extended[0] = d;
    for (int s = 0; s < out.slots(); ++s) extended[s + 1] = tuple[s];
    const Cplx head = (*psi.unital_tensor)[tuple_to_flat(extended, du)];
    for (int s = 0; s < out.slots(); ++s) extended[s] = tuple[s];
    extended[psi.degree] = d;
    const Cplx tail = (*psi.unital_tensor)[tuple_to_flat(extended, du)];
    out.tensor[flat] = head - tail;
  }
  return out;
}

/// B = (1 + lambda + ... ) o B0.
inline CyclicCochain big_b_op(const CyclicCochain& psi) {
  return cyclic_symmetrize(b0_op(psi));
}

struct CocycleReport {
  double lambda_residual = 0.0;  // ||(1 - lambda) psi||_inf
  double b_residual = 0.0;       // ||b psi||_inf
  double scale = 1.0;            // max(1, ||psi||_inf)
  bool pass(double tol) const { return lambda_residual <= tol * scale && b_residual <= tol * scale; }
};

inline CocycleReport is_cyclic_cocycle(const CyclicCochain& psi) {
  CocycleReport rep;
  rep.scale = std::max(1.0, sup_abs(psi));
  rep.lambda_residual = sup_abs(cochain_sub(psi, lambda_op(psi)));
  rep.b_residual = sup_abs(hochschild_b(psi));
  return rep;
}

}  // namespace cherncat
