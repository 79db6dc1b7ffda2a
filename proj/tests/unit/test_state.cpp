#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qst/error.hpp"
#include "qst/state.hpp"

using namespace qst;

namespace {

HermitianMatrix diag(std::initializer_list<double> v) {
  const std::vector<double> d(v);
  return HermitianMatrix::diagonal(d);
}

// Simplex projection by bisection on the threshold, independent of the sort rule.
std::vector<double> simplex_bisect(const std::vector<double>& v) {
  double lo = *std::min_element(v.begin(), v.end()) - 1.0;
  double hi = *std::max_element(v.begin(), v.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double x : v) s += std::max(0.0, x - mid);
    (s > 1.0 ? lo : hi) = mid;
  }
  std::vector<double> out;
  for (double x : v) out.push_back(std::max(0.0, x - 0.5 * (lo + hi)));
  return out;
}

}  // namespace

TEST_SUITE("state") {
  TEST_CASE("validation") {
    const auto mixed = validate_density(0.25 * HermitianMatrix::identity(4));
    CHECK(mixed.eigenvalues().size() == 4);
    CHECK(DensityMatrix::maximally_mixed(3).matrix().trace() == doctest::Approx(1.0));
    CHECK_THROWS_AS(validate_density(diag({0.5, 0.6})), TraceError);
    CHECK_THROWS_AS(validate_density(diag({1.2, -0.2})), PositivityError);
    const auto clamped = validate_density(diag({1.0 + 1e-9, -1e-9}));
    CHECK(clamped.min_eigenvalue() == 0.0);
  }

  TEST_CASE("simplex projection") {
    std::mt19937_64 g(21);
    for (int k = 0; k < 300; ++k) {
      std::vector<double> v(1 + k % 9);
      for (auto& x : v) x = 2.0 * oracle::gauss(g);
      const auto p = project_to_simplex(v);
      const auto q = simplex_bisect(v);
      double sum = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(p[i] >= 0.0);
        CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-9).scale(1.0));
        sum += p[i];
      }
      CHECK(sum == doctest::Approx(1.0));
    }
  }

  TEST_CASE("spectahedron projection") {
    const auto p = project_to_spectahedron(diag({2, 0}));
    CHECK(max_abs_diff(p.matrix().entries(), diag({1, 0}).entries()) <= 1e-14);
    std::mt19937_64 g(22);
    for (int k = 0; k < 100; ++k) {
      const auto rho = oracle::random_state(2 + k % 5, g, k);
      CHECK(max_abs_diff(project_to_spectahedron(rho.matrix()).matrix().entries(), rho.matrix().entries()) <= 1e-10);
      // Optimality: <A - P, S - P> <= 0 for feasible S.
      const auto a = oracle::random_hermitian(rho.dim(), g);
      const auto proj = project_to_spectahedron(a);
      for (int t = 0; t < 5; ++t) {
        const auto s = oracle::random_state(rho.dim(), g, t);
        CHECK(oracle::trace_product(a - proj.matrix(), s.matrix() - proj.matrix()) <= 1e-9);
      }
    }
  }

  TEST_CASE("haar states") {
    const auto full = haar_random_state(2, 2, 5);
    CHECK(full.min_eigenvalue() > 0.0);
    CHECK(full.matrix().trace() == doctest::Approx(1.0).epsilon(1e-10));
    const auto pure = haar_random_state(6, 1, 5);
    CHECK(pure.matrix().frobenius() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t r = 1; r <= 6; ++r) {
      const auto s = haar_random_state(6, r, 40 + r);
      CHECK(numerical_rank(s.matrix(), 1e-12) == r);
    }
    CHECK(max_abs_diff(haar_random_state(4, 2, 9).matrix().entries(), haar_random_state(4, 2, 9).matrix().entries()) == 0.0);
    CHECK_THROWS_AS(haar_random_state(3, 4, 1), ArgumentError);
    CHECK_THROWS_AS(haar_random_state(3, 0, 1), ArgumentError);
    const auto u = haar_unitary(5, 3);
    CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(5)) <= 1e-12);
    const auto o = haar_orthogonal(5, 3);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) CHECK(o(i, j).imag() == 0.0);
  }

  TEST_CASE("haar mean is maximally mixed") {
    // Unitary invariance implies E rho = I/m.
    const std::size_t m = 3;
    HermitianMatrix acc(m);
    const int n = 4000;
    for (int k = 0; k < n; ++k) acc += haar_random_state(m, 1, 5000 + k).matrix();
    acc *= 1.0 / n;
    CHECK(max_abs_diff(acc.entries(), (1.0 / m * HermitianMatrix::identity(m)).entries()) < 0.03);
  }

  TEST_CASE("power law states") {
    const auto s = power_law_state(4, 1.0, 1.0, 3);
    CHECK(s.matrix().trace() == doctest::Approx(1.0));
    const auto t = power_law_state(8, 0.5, 10.0, 4);
    const auto& ev = t.eigenvalues();
    for (std::size_t j = 1; j < 8; ++j) {
      CHECK(ev[j] * double((j + 1) * (j + 1)) == doctest::Approx(ev[0]).epsilon(1e-8));
    }
    CHECK_THROWS_AS(power_law_state(8, 0.5, 1.0, 4), ArgumentError);
  }

  TEST_CASE("smoothing") {
    const auto s = smooth_state(validate_density(diag({1, 0})), 0.5);
    CHECK(max_abs_diff(s.matrix().entries(), diag({0.75, 0.25}).entries()) <= 1e-15);
    CHECK_THROWS_AS(smooth_state(s, 0.0), ArgumentError);
    CHECK_THROWS_AS(smooth_state(s, 1.0), ArgumentError);
    CHECK(default_smoothing_delta(4, 10) == doctest::Approx(1.0 / 1600));
  }

  TEST_CASE("packing states") {
    const auto q1 = SubspaceProjector::full(1);
    const auto s = packing_state(q1, 0.5);
    CHECK(max_abs_diff(s.matrix().entries(), diag({0.5, 0.5}).entries()) <= 1e-15);
    const auto q = SubspaceProjector::from_columns(haar_orthogonal(5, 2), 2);
    const auto t = packing_state(q, 0.3);
    CHECK(t.dim() == 6);
    CHECK(t.matrix().trace() == doctest::Approx(1.0));
    CHECK(t.eigenvalues()[0] == doctest::Approx(0.7));
  }

  TEST_CASE("projector packing sampling") {
    PackingConfig one{4, 2, 0.2, 1, 2.0, 0.0};
    const auto r1 = sample_projector_packing(one, 1);
    CHECK(r1.complete);
    CHECK(r1.projectors.size() == 1);
    PackingConfig cfg{3, 2, 0.2, 4, 2.0, 0.5};
    const auto res = sample_projector_packing(cfg, 7);
    REQUIRE(res.complete);
    REQUIRE(res.projectors.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(res.projectors[i].rank() == 1);
      for (std::size_t j = i + 1; j < 4; ++j) {
        CHECK(schatten_norm(res.projectors[i].matrix() - res.projectors[j].matrix(), 2.0) > 0.5);
      }
    }
    CHECK_THROWS_AS((PackingConfig{3, 2, 1.5, 2, 2.0, 0.1}.validate()), ArgumentError);
    CHECK_THROWS_AS((PackingConfig{3, 1, 0.5, 2, 2.0, 0.1}.validate()), ArgumentError);
    CHECK_THROWS_AS((PackingConfig{4, 3, 0.5, 2, 2.0, 0.1}.validate()), ArgumentError);
  }
}
