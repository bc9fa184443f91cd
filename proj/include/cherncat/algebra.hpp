#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cherncat/linalg.hpp"

namespace cherncat {

using Element = Eigen::VectorXcd;  // coordinates over the algebra basis

/// Finite-dimensional complex associative algebra by structure constants:
/// e_i e_j = sum_k c[i][j][k] e_k. The unit, if present, is a coordinate vector.
struct FiniteAlgebra {
  std::vector<std::string> basis;
  std::vector<Cplx> structure;  // flattened c[i][j][k], k fastest
  std::optional<Element> unit;

  int dim() const { return static_cast<int>(basis.size()); }

  const Cplx& c(int i, int j, int k) const {
    const int d = dim();
    return structure[static_cast<std::size_t>((i * d + j)) * d + k];
  }
  Cplx& c(int i, int j, int k) {
    const int d = dim();
    return structure[static_cast<std::size_t>((i * d + j)) * d + k];
  }

  int index_of(const std::string& label) const {
    for (int i = 0; i < dim(); ++i)
      if (basis[i] == label) return i;
    throw DomainError("unknown basis label: " + label);
  }

  void require_shape() const {
    const std::size_t d = basis.size();
    if (d == 0) throw DomainError("algebra: empty basis");
    std::unordered_set<std::string> seen;
    for (const auto& b : basis)
      if (!seen.insert(b).second) throw DomainError("algebra: duplicate basis label: " + b);
    if (structure.size() != d * d * d) throw DomainError("algebra: structure constant count mismatch");
    if (unit && static_cast<std::size_t>(unit->size()) != d)
      throw DomainError("algebra: unit coordinate length mismatch");
  }
};

/// Bilinear product of coordinate vectors through the structure constants.
inline Element multiply(const FiniteAlgebra& a, const Element& x, const Element& y) {
  const int d = a.dim();
  if (x.size() != d || y.size() != d) throw ShapeError("multiply: coordinate length mismatch");
  Element out = Element::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (x(i) == Cplx(0)) continue;
    for (int j = 0; j < d; ++j) {
      const Cplx w = x(i) * y(j);
      if (w == Cplx(0)) continue;
      for (int k = 0; k < d; ++k) out(k) += w * a.c(i, j, k);
    }
  }
  return out;
}

struct AlgebraReport {
  double associativity_residual = 0.0;
  double unit_residual = 0.0;
  bool pass(double tol) const { return associativity_residual <= tol && unit_residual <= tol; }
};

/// Max associativity residual over basis triples, plus the unit-law residual
/// when a unit is declared.
inline AlgebraReport validate_algebra(const FiniteAlgebra& a) {
  a.require_shape();
  const int d = a.dim();
  AlgebraReport rep;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) {
          // coefficient of e_m in (e_i e_j) e_k minus e_i (e_j e_k)
          Cplx lhs(0), rhs(0);
          for (int l = 0; l < d; ++l) {
            lhs += a.c(i, j, l) * a.c(l, k, m);
            rhs += a.c(j, k, l) * a.c(i, l, m);
          }
          rep.associativity_residual = std::max(rep.associativity_residual, std::abs(lhs - rhs));
        }
  if (a.unit) {
    for (int i = 0; i < d; ++i) {
      Element ei = Element::Zero(d);
      ei(i) = 1.0;
      Element left = multiply(a, *a.unit, ei);
      Element right = multiply(a, ei, *a.unit);
      rep.unit_residual = std::max(rep.unit_residual, (left - ei).lpNorm<Eigen::Infinity>());
      rep.unit_residual = std::max(rep.unit_residual, (right - ei).lpNorm<Eigen::Infinity>());
    }
  }
  return rep;
}

/// A + C with products (a, l)(b, m) = (ab + lb + ma, lm); the adjoined unit is
/// a fresh basis vector even when A already had one.
inline FiniteAlgebra unitalize(const FiniteAlgebra& a) {
  a.require_shape();
  const int d = a.dim();
  FiniteAlgebra out;
  out.basis = a.basis;
  std::string label = "1";
  std::unordered_set<std::string> taken(a.basis.begin(), a.basis.end());
  while (taken.count(label)) label += "'";
  out.basis.push_back(label);
  const int du = d + 1;
  out.structure.assign(static_cast<std::size_t>(du) * du * du, Cplx(0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out.c(i, j, k) = a.c(i, j, k);
  for (int i = 0; i < d; ++i) {
    out.c(i, d, i) = 1.0;  // e_i * 1 = e_i
    out.c(d, i, i) = 1.0;  // 1 * e_i = e_i
  }
  out.c(d, d, d) = 1.0;
  Element u = Element::Zero(du);
  u(d) = 1.0;
  out.unit = u;
  return out;
}

}  // namespace cherncat
