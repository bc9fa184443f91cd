#pragma once

#include <optional>
#include <vector>

#include "cherncat/omega.hpp"

namespace cherncat {

/// Periodicity operator S on the character: for each (n+3)-tuple, the sum over
/// j = 0..n+1 of cycle integrals of words with the j-th d-slot collapsed to
/// rho(a_j) rho(a_{j+1}). The j = 0 term has empty prefix and odd Omega-degree,
/// so the supertrace kills it; it is summed anyway to pin the convention.
inline CyclicCochain s_operator(const FredholmModule& fm, int n) {
  if (n < 0 || n % 2 != 0) throw DomainError("s_operator: degree must be even and nonnegative");
  fm.require_shape();
  const int m = n / 2;
  const int d = fm.algebra.dim();
  const Cplx pref = two_i_pi_pow(m + 1) * factorial(m);

  std::vector<GradedOperator> drho;
  drho.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) drho.push_back(d_op(fm, fm.rho[i]));

  CyclicCochain out = zero_cochain(fm.algebra, n + 2);
  parallel_for(out.tensor.size(), [&](std::size_t flat) {
    std::vector<int> tuple(static_cast<std::size_t>(n) + 3);
    flat_to_tuple(flat, d, tuple);
    Cplx total(0);
    for (int j = 0; j <= n + 1; ++j) {
      GradedOperator op = fm.rho[static_cast<std::size_t>(tuple[0])];
      if (j > 0) {
        for (int s = 1; s < j; ++s) op = mul(op, drho[static_cast<std::size_t>(tuple[s])]);
        op = mul(op, fm.rho[static_cast<std::size_t>(tuple[j])]);
      }
      op = mul(op, fm.rho[static_cast<std::size_t>(tuple[j + 1])]);
      for (int s = j + 2; s <= n + 2; ++s) op = mul(op, drho[static_cast<std::size_t>(tuple[s])]);
      total += supertrace(fm, op);
    }
    out.tensor[flat] = pref * total;
  });
  return out;
}

struct WitnessResult {
  CyclicCochain phi;      // degree n+1
  double residual = 0.0;  // ||b(K phi) - (S tau^n - tau^{n+2})||_inf
  double scale = 1.0;     // max(1, ||S tau^n||_inf, ||tau^{n+2}||_inf)
};

/// Explicit coboundary witness for periodicity:
/// phi_j(a_0..a_{n+1}) = Trace(eps F rho(a_j) d rho(a_{j+1}) ... d rho(a_{j-1})),
/// phi = sum_j (-1)^j phi_j, and b(2^m i^{m+2} pi^{m+1} m! phi) = S tau^n - tau^{n+2}.
inline WitnessResult periodicity_witness(const FredholmModule& fm, int n) {
  if (n < 0 || n % 2 != 0) throw DomainError("periodicity_witness: degree must be even and nonnegative");
  fm.require_shape();
  const int m = n / 2;
  const int d = fm.algebra.dim();
  const GradedOperator eps_f = mul(epsilon_operator(fm.h), fm.f_op);

  std::vector<GradedOperator> drho;
  drho.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) drho.push_back(d_op(fm, fm.rho[i]));

  CyclicCochain phi = zero_cochain(fm.algebra, n + 1);
  parallel_for(phi.tensor.size(), [&](std::size_t flat) {
    std::vector<int> tuple(static_cast<std::size_t>(n) + 2);
    flat_to_tuple(flat, d, tuple);
    Cplx total(0);
    for (int j = 0; j <= n + 1; ++j) {
      GradedOperator op = fm.rho[static_cast<std::size_t>(tuple[j])];
      for (int s = j + 1; s <= n + 1; ++s) op = mul(op, drho[static_cast<std::size_t>(tuple[s])]);
      for (int s = 0; s < j; ++s) op = mul(op, drho[static_cast<std::size_t>(tuple[s])]);
      total += (j % 2 == 0 ? 1.0 : -1.0) * total_trace(mul(eps_f, op));
    }
    phi.tensor[flat] = total;
  });

  const Cplx constant = std::pow(2.0, m) * unit_imag_pow(m + 2) *
                        std::pow(std::numbers::pi, m + 1) * factorial(m);
  CyclicCochain lhs = hochschild_b(cochain_scale(constant, phi));
  CyclicCochain s_tau = s_operator(fm, n);
  CyclicCochain tau_next = chern_character(fm, n + 2);
  CyclicCochain rhs = cochain_sub(s_tau, tau_next);

  WitnessResult out{std::move(phi), 0.0, 1.0};
  out.residual = sup_abs(cochain_sub(lhs, rhs));
  out.scale = std::max({1.0, sup_abs(s_tau), sup_abs(tau_next)});
  return out;
}

struct CohomologousResult {
  bool decision = false;
  double residual = 0.0;                   // ||b x - (psi1 - psi2)||_inf at the LS optimum
  double scale = 1.0;
  std::optional<CyclicCochain> witness;    // lambda-invariant x with b x = psi1 - psi2
};

/// Coboundary membership in the cyclic complex: decides whether
/// psi1 - psi2 = b x for some lambda-invariant x of one degree lower, by dense
/// least squares over the cyclically symmetrized basis. Inputs must be cyclic
/// cocycles at the given tolerance.
inline CohomologousResult cohomologous(const CyclicCochain& psi1, const CyclicCochain& psi2, double tol) {
  psi1.require_shape();
  psi2.require_shape();
  if (psi1.degree != psi2.degree) throw ShapeError("cohomologous: degree mismatch");
  if (psi1.algebra.dim() != psi2.algebra.dim()) throw ShapeError("cohomologous: algebra mismatch");
  const double scale = std::max({1.0, sup_abs(psi1), sup_abs(psi2)});
  for (const CyclicCochain* psi : {&psi1, &psi2}) {
    CocycleReport rep = is_cyclic_cocycle(*psi);
    if (!rep.pass(tol))
      throw DomainError("cohomologous: input is not a cyclic cocycle at the given tolerance");
  }
  CyclicCochain diff = cochain_sub(psi1, psi2);
  CohomologousResult out;
  out.scale = scale;

  const int k = psi1.degree;
  if (k == 0) {
    // no degree -1 cochains: classes agree iff the tensors do
    out.residual = sup_abs(diff);
    out.decision = out.residual <= tol * scale;
    return out;
  }

  const int d = psi1.algebra.dim();
  std::size_t rows = diff.tensor.size();
  std::size_t cols = 1;
  for (int s = 0; s < k; ++s) cols *= static_cast<std::size_t>(d);

  // columns: b(symmetrized basis tensor); the spanning set may be redundant,
  // which least squares tolerates
  Mat a_ls(rows, cols);
  std::vector<CyclicCochain> sym_basis;
  sym_basis.reserve(cols);
  for (std::size_t col = 0; col < cols; ++col) {
    CyclicCochain e = zero_cochain(psi1.algebra, k - 1);
    e.tensor[col] = Cplx(1);
    CyclicCochain sym = cyclic_symmetrize(e);
    CyclicCochain img = hochschild_b(sym);
    for (std::size_t r = 0; r < rows; ++r) a_ls(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = img.tensor[r];
    sym_basis.push_back(std::move(sym));
  }
  Eigen::VectorXcd rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) rhs(static_cast<Eigen::Index>(r)) = diff.tensor[r];
  Eigen::VectorXcd x = a_ls.completeOrthogonalDecomposition().solve(rhs);
  out.residual = (a_ls * x - rhs).lpNorm<Eigen::Infinity>();
  out.decision = out.residual <= tol * scale;
  if (out.decision) {
    CyclicCochain witness = zero_cochain(psi1.algebra, k - 1);
    for (std::size_t col = 0; col < cols; ++col) {
      if (x(static_cast<Eigen::Index>(col)) == Cplx(0)) continue;
      for (std::size_t i = 0; i < witness.tensor.size(); ++i)
        witness.tensor[i] += x(static_cast<Eigen::Index>(col)) * sym_basis[col].tensor[i];
    }
    out.witness = std::move(witness);
  }
  return out;
}

}  // namespace cherncat
