#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "support/builders.hpp"

using namespace cherncat;
using builders::Rng;

namespace {

const Cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);

CyclicCochain random_cochain(Rng& rng, const FiniteAlgebra& a, int degree) {
  CyclicCochain out = zero_cochain(a, degree);
  for (Cplx& v : out.tensor) v = rng.small_cplx();
  return out;
}

}  // namespace

TEST_CASE("multi-index helpers round-trip") {
  std::vector<int> tuple{2, 0, 1};
  const std::size_t flat = tuple_to_flat(tuple, 3);
  REQUIRE(flat == 2 * 9 + 0 * 3 + 1);
  std::vector<int> back(3);
  flat_to_tuple(flat, 3, back);
  REQUIRE(back == tuple);
}

TEST_CASE("cyclic rotation carries the sign (-1)^k") {
  Rng rng(61);
  FiniteAlgebra a = builders::two_point_algebra();

  CyclicCochain psi1 = random_cochain(rng, a, 1);
  CyclicCochain rot1 = lambda_op(psi1);
  std::vector<int> ab{0, 1};
  std::vector<int> ba{1, 0};
  REQUIRE(rot1.tensor[tuple_to_flat(ab, 2)] == -psi1.tensor[tuple_to_flat(ba, 2)]);

  CyclicCochain psi2 = random_cochain(rng, a, 2);
  CyclicCochain rot2 = lambda_op(psi2);
  std::vector<int> abc{0, 1, 1};
  std::vector<int> bca{1, 1, 0};
  REQUIRE(rot2.tensor[tuple_to_flat(abc, 2)] == psi2.tensor[tuple_to_flat(bca, 2)]);

  // lambda^(k+1) = id
  CyclicCochain round = lambda_op(lambda_op(psi1));
  for (std::size_t i = 0; i < round.tensor.size(); ++i)
    REQUIRE(std::abs(round.tensor[i] - psi1.tensor[i]) == 0.0);
}

TEST_CASE("symmetrization lands in the lambda-invariants") {
  Rng rng(62);
  FiniteAlgebra a = builders::two_point_algebra();
  for (int k = 0; k <= 3; ++k) {
    CyclicCochain psi = random_cochain(rng, a, k);
    CyclicCochain sym = cyclic_symmetrize(psi);
    REQUIRE(sup_abs(cochain_sub(lambda_op(sym), sym)) < 1e-13);
  }
}

TEST_CASE("hochschild coboundary at hand-checked values") {
  FiniteAlgebra a = builders::proj_algebra();
  CyclicCochain psi = zero_cochain(a, 1);
  psi.tensor[0] = Cplx(1.0);
  CyclicCochain bpsi = hochschild_b(psi);
  REQUIRE(bpsi.degree == 2);
  REQUIRE(bpsi.tensor[0] == Cplx(1.0));

  CyclicCochain phi0 = zero_cochain(a, 0);
  phi0.tensor[0] = Cplx(1.0);
  CyclicCochain bphi0 = hochschild_b(phi0);
  // (b phi)(x0, x1) = phi(x0 x1) - phi(x1 x0) = 0 on a commutative algebra.
  REQUIRE(sup_abs(bphi0) == 0.0);
}

TEST_CASE("b squares to zero") {
  Rng rng(63);
  for (int s = 0; s < 5; ++s) {
    FiniteAlgebra a = builders::seed_algebra(static_cast<builders::Seed>(s));
    for (int k = 0; k <= 2; ++k) {
      CyclicCochain psi = random_cochain(rng, a, k);
      REQUIRE(sup_abs(hochschild_b(hochschild_b(psi))) < 1e-13);
    }
  }
}

TEST_CASE("b0 needs the unital evaluation rule") {
  Rng rng(64);
  FiniteAlgebra a = builders::two_point_algebra();
  CyclicCochain psi = random_cochain(rng, a, 1);
  REQUIRE_THROWS_AS(b0_op(psi), DomainError);

  FredholmModule fm = builders::proj_module();
  CyclicCochain tau0 = chern_character(fm, 0);
  REQUIRE_THROWS_AS(b0_op(tau0), DomainError);  // degree 0 has no B0

  CyclicCochain tau2 = chern_character(fm, 2);
  REQUIRE(tau2.unital_tensor);
  REQUIRE(sup_abs(b0_op(tau2)) < 1e-13);
  REQUIRE(sup_abs(big_b_op(tau2)) < 1e-13);
}

TEST_CASE("characters are cyclic cocycles") {
  FredholmModule fm = builders::proj_module();
  for (int n : {0, 2}) {
    CyclicCochain tau = chern_character(fm, n);
    CocycleReport rep = is_cyclic_cocycle(tau);
    REQUIRE(rep.lambda_residual < 1e-13);
    REQUIRE(rep.b_residual < 1e-13);
    REQUIRE(rep.pass(1e-12));
  }

  Rng rng(65);
  for (int i = 0; i < 15; ++i) {
    FredholmModule inst = builders::random_instance(rng);
    for (int n : {0, 2}) {
      CyclicCochain tau = chern_character(inst, n);
      CocycleReport rep = is_cyclic_cocycle(tau);
      REQUIRE(rep.lambda_residual <= 1e-9 * rep.scale);
      REQUIRE(rep.b_residual <= 1e-9 * rep.scale);
    }
  }
}

TEST_CASE("periodicity operator on the projection module") {
  FredholmModule fm = builders::proj_module();
  CyclicCochain stau0 = s_operator(fm, 0);
  REQUIRE(stau0.degree == 2);
  REQUIRE(std::abs(stau0.tensor[0] - kTwoPiI) < 1e-13);
  REQUIRE(is_cyclic_cocycle(stau0).pass(1e-12));
  REQUIRE_THROWS_AS(s_operator(fm, 1), DomainError);
}

TEST_CASE("periodicity witness vanishes identically on the projection module") {
  FredholmModule fm = builders::proj_module();
  WitnessResult w = periodicity_witness(fm, 0);
  REQUIRE(w.residual < 1e-13);
  REQUIRE(sup_abs(w.phi) < 1e-13);
}

TEST_CASE("periodicity witness on random instances") {
  Rng rng(66);
  for (int i = 0; i < 10; ++i) {
    FredholmModule fm = builders::random_instance(rng);
    for (int n : {0, 2}) {
      WitnessResult w = periodicity_witness(fm, n);
      REQUIRE(w.residual <= 1e-9 * w.scale);
    }
  }
}

TEST_CASE("cohomologous certifies the periodicity classes") {
  FredholmModule fm = builders::proj_module();
  CohomologousResult r = cohomologous(s_operator(fm, 0), chern_character(fm, 2), 1e-9);
  REQUIRE(r.decision);
  REQUIRE(r.residual <= 1e-9 * r.scale);
  REQUIRE(r.witness);
  CyclicCochain diff = cochain_sub(s_operator(fm, 0), chern_character(fm, 2));
  REQUIRE(sup_abs(cochain_sub(hochschild_b(*r.witness), diff)) < 1e-9 * r.scale);
  REQUIRE(sup_abs(cochain_sub(lambda_op(*r.witness), *r.witness)) < 1e-9);
}

TEST_CASE("cohomologous separates distinct classes") {
  FredholmModule fm = builders::proj_module();
  CyclicCochain tau0 = chern_character(fm, 0);
  CohomologousResult deg0 = cohomologous(tau0, cochain_scale(Cplx(2.0), tau0), 1e-9);
  REQUIRE_FALSE(deg0.decision);

  CyclicCochain tau2 = chern_character(fm, 2);
  CohomologousResult deg2 = cohomologous(tau2, cochain_scale(Cplx(2.0), tau2), 1e-9);
  REQUIRE_FALSE(deg2.decision);
  REQUIRE(deg2.residual > 1.0);
}

TEST_CASE("cohomologous rejects non-cocycle inputs") {
  Rng rng(67);
  FiniteAlgebra a = builders::two_point_algebra();
  CyclicCochain junk = random_cochain(rng, a, 2);
  REQUIRE_THROWS_AS(cohomologous(junk, junk, 1e-9), DomainError);
}

TEST_CASE("cochain arithmetic guards") {
  FiniteAlgebra a = builders::proj_algebra();
  CyclicCochain k1 = zero_cochain(a, 1);
  CyclicCochain k2 = zero_cochain(a, 2);
  REQUIRE_THROWS_AS(cochain_sub(k1, k2), ShapeError);

  CyclicCochain bad = k1;
  bad.tensor[0] = Cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  REQUIRE_THROWS_AS(bad.require_shape(), DomainError);
}
