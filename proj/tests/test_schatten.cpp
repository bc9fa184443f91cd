#include <catch2/catch_amalgamated.hpp>

#include "support/builders.hpp"

using namespace cherncat;
using builders::Rng;

TEST_CASE("singular values of hand-checked matrices") {
  Mat m(2, 1);
  m << Cplx(3.0), Cplx(4.0);
  RVec sv = singular_values(m);
  REQUIRE(sv.size() == 1);
  REQUIRE(sv(0) == Catch::Approx(5.0).margin(1e-12));

  Mat shift(2, 2);
  shift << Cplx(0.0), Cplx(0.0, 2.0), Cplx(0.0), Cplx(0.0);
  sv = singular_values(shift);
  REQUIRE(sv(0) == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(sv(1) == Catch::Approx(0.0).margin(1e-12));

  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = Cplx(3.0);
  diag(1, 1) = Cplx(0.0, -4.0);
  sv = singular_values(diag);
  REQUIRE(sv(0) == Catch::Approx(4.0).margin(1e-12));
  REQUIRE(sv(1) == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("schatten norms at hand-checked values") {
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = Cplx(3.0);
  diag(1, 1) = Cplx(4.0);
  REQUIRE(schatten_norm(diag, 1.0) == Catch::Approx(7.0).margin(1e-12));
  REQUIRE(schatten_norm(diag, 2.0) == Catch::Approx(5.0).margin(1e-12));
  REQUIRE(operator_norm(diag) == Catch::Approx(4.0).margin(1e-12));

  REQUIRE_THROWS_AS(schatten_norm(diag, 0.5), DomainError);
  REQUIRE_THROWS_AS(schatten_norm(diag, 0.0), DomainError);

  Mat empty(0, 0);
  REQUIRE(schatten_norm(empty, 2.0) == 0.0);
  REQUIRE(operator_norm(empty) == 0.0);
  REQUIRE(singular_values(empty).size() == 0);
}

TEST_CASE("holder inequality on random pairs") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 1 + rng.below(5);
    Mat a = builders::random_matrix(rng, n, n);
    Mat b = builders::random_matrix(rng, n, n);
    const double p = rng.uniform(2.0, 4.0);
    const double q = rng.uniform(2.0, 4.0);
    const double r = 1.0 / (1.0 / p + 1.0 / q);
    REQUIRE(schatten_norm(a * b, r) <= schatten_norm(a, p) * schatten_norm(b, q) + 1e-10);
    REQUIRE(schatten_norm(a * b, 1.0) <= schatten_norm(a, 2.0) * schatten_norm(b, 2.0) + 1e-10);
  }
}

TEST_CASE("quasi-triangle inequality with factor 2^{1/p}") {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 1 + rng.below(5);
    Mat a = builders::random_matrix(rng, n, n);
    Mat b = builders::random_matrix(rng, n, n);
    const double p = rng.uniform(1.0, 4.0);
    REQUIRE(schatten_norm(a + b, p) <=
            std::pow(2.0, 1.0 / p) * (schatten_norm(a, p) + schatten_norm(b, p)) + 1e-10);
  }
}

TEST_CASE("schatten norm decreases in p") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 1 + rng.below(5);
    Mat a = builders::random_matrix(rng, n, n);
    const double p = rng.uniform(1.0, 4.0);
    const double q = p + rng.uniform(0.0, 3.0);
    REQUIRE(schatten_norm(a, q) <= schatten_norm(a, p) + 1e-10);
    REQUIRE(operator_norm(a) <= schatten_norm(a, p) + 1e-10);
  }
}

TEST_CASE("schatten ideal bound under bounded factors") {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 1 + rng.below(5);
    Mat a = builders::random_matrix(rng, n, n);
    Mat x = builders::random_matrix(rng, n, n);
    const double p = rng.uniform(1.0, 4.0);
    REQUIRE(schatten_norm(x * a, p) <= operator_norm(x) * schatten_norm(a, p) + 1e-10);
    REQUIRE(schatten_norm(a * x, p) <= schatten_norm(a, p) * operator_norm(x) + 1e-10);
  }
}

TEST_CASE("unitary invariance of singular values") {
  Rng rng(15);
  for (int i = 0; i < 20; ++i) {
    Mat a = builders::random_matrix(rng, 3, 3);
    Eigen::HouseholderQR<Mat> qr(builders::random_matrix(rng, 3, 3));
    Mat u = qr.householderQ();
    const double p = rng.uniform(1.0, 4.0);
    REQUIRE(schatten_norm(u * a, p) == Catch::Approx(schatten_norm(a, p)).margin(1e-10));
    REQUIRE(schatten_norm(a * u, p) == Catch::Approx(schatten_norm(a, p)).margin(1e-10));
  }
}
