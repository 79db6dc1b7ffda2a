#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qst/error.hpp"
#include "qst/rates.hpp"
#include "qst/rng.hpp"

using namespace qst;

namespace {

double gaussian_kl(double mu1, double s1, double mu2, double s2) {
  return std::log(s2 / s1) + (s1 * s1 + (mu1 - mu2) * (mu1 - mu2)) / (2 * s2 * s2) - 0.5;
}

}  // namespace

TEST_SUITE("rates") {
  TEST_CASE("lower rates on hand cases") {
    for (std::size_t m : {2u, 4u, 8u}) {
      for (double n : {10.0, 1e3, 1e6}) {
        for (double r : {1.0, 2.0}) {
          if (r > m) continue;
          RateParams p{m, r, n, 1.0 / std::sqrt(double(m))};
          const double tau = m / std::sqrt(n);
          CHECK(minimax_lower_rate(RateKind::kSchatten, 1, p) == doctest::Approx(std::min(tau * r, 1.0)));
          CHECK(minimax_lower_rate(RateKind::kSchatten, kInfinity, p) == doctest::Approx(std::min(tau, 1.0)));
          CHECK(minimax_lower_rate(RateKind::kHellinger, 1, p) == doctest::Approx(std::min(tau * r, 1.0)));
        }
      }
    }
    // Non-decreasing in r and bounded by one.
    for (double n : {1e2, 1e4, 1e6}) {
      double prev = 0.0;
      for (double r = 1; r <= 8; ++r) {
        const double v = minimax_lower_rate(RateKind::kSchatten, 1.5, {8, r, n, 0.1});
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
      }
    }
    CHECK_THROWS_AS(minimax_lower_rate(RateKind::kSchatten, 0.5, {4, 1, 100, 1}), ArgumentError);
    CHECK_THROWS_AS(minimax_lower_rate(RateKind::kSchatten, 1, {4, 5, 100, 1}), ArgumentError);
  }

  TEST_CASE("upper rates") {
    const RateParams p{8, 2, 1e8, 0.1};
    const double tau = 0.1 * std::pow(8.0, 1.5) / 1e4;
    const double lm = std::log(8.0), lmn = std::log(8e8);
    CHECK(upper_rate(RateKind::kSchatten, 2, p) ==
          doctest::Approx(std::min({tau * std::sqrt(2.0) * std::sqrt(lm), std::sqrt(tau) * std::pow(lm, 0.25), 2.0})));
    CHECK(upper_rate(RateKind::kSchatten, 1, p) == doctest::Approx(std::min(tau * 2 * std::sqrt(lm) * lmn, 2.0)));
    CHECK(upper_rate(RateKind::kKl, 1, p) == doctest::Approx(tau * 2 * std::sqrt(lm) * lmn));
    CHECK(upper_rate(RateKind::kHellinger, 1, p) == doctest::Approx(std::min(tau * 2 * std::sqrt(lm) * lmn, 2.0)));
    CHECK_THROWS_AS(upper_rate(RateKind::kSchatten, 3, p), ArgumentError);
    CHECK(parse_rate_kind("kl") == RateKind::kKl);
    CHECK_THROWS_AS(parse_rate_kind("bogus"), ArgumentError);
  }

  TEST_CASE("upper and lower rates differ by at most log factors") {
    for (std::size_t m : {4u, 8u, 16u}) {
      for (double n = 1e8; n <= 1e12; n *= 10) {
        for (double q : {1.0, 1.5, 2.0}) {
          const RateParams p{m, 2, n, 0.1};
          const double ratio = upper_rate(RateKind::kSchatten, q, p) / minimax_lower_rate(RateKind::kSchatten, q, p);
          CHECK(ratio >= 1.0);
          CHECK(ratio <= std::pow(std::log(m * n), 2));
        }
      }
    }
  }

  TEST_CASE("rates scale as n^-1/2") {
    const RateParams p{8, 2, 1e8, 0.1};
    RateParams q = p;
    q.n *= 2;
    CHECK(minimax_lower_rate(RateKind::kSchatten, 1, q) ==
          doctest::Approx(minimax_lower_rate(RateKind::kSchatten, 1, p) / std::sqrt(2.0)));
    CHECK(minimax_lower_rate(RateKind::kKl, 1, q) == doctest::Approx(minimax_lower_rate(RateKind::kKl, 1, p) / std::sqrt(2.0)));
  }

  TEST_CASE("effective rank and kappa") {
    CHECK(effective_rank(0, 3, 0.5, 8) == doctest::Approx(3.0));
    CHECK(effective_rank(0, 30, 0.5, 8) == doctest::Approx(8.0));
    CHECK(effective_rank(1, 1, 0.1, 100) == doctest::Approx(10.0));
    CHECK_THROWS_AS(effective_rank(1, 1, 0.0, 4), ArgumentError);
    CHECK(kappa_choice(1, 8, 2, 1e6) == doctest::Approx(0.1 * std::pow(8.0, 1.5) / 1000));
    CHECK(kappa_choice(1, 8, 2, 1e6) == doctest::Approx(0.00226).epsilon(1e-3));
    CHECK(kappa_choice(1, 8, 3, 1e6) == doctest::Approx(2 * kappa_choice(1, 8, 2, 1e6)));
    CHECK_THROWS_AS(kappa_choice(1, 8, 1, 1e6), ArgumentError);
  }

  TEST_CASE("bernstein bound") {
    const std::size_t m = 8, n = 100000;
    const double t = 3;
    CHECK(bernstein_bound(1 / std::sqrt(8.0), 1 / std::sqrt(8.0), n, t, m) ==
          doctest::Approx(2 * std::sqrt((t + std::log(16.0)) / (n * 8.0))));
    CHECK(bernstein_bound(0.1, 10, 4, t, m) == doctest::Approx(2 * 10 * (t + std::log(16.0)) / 4));
  }

  TEST_CASE("bernstein bound dominates empirical quantiles") {
    for (int b : {2, 3}) {
      const auto basis = ObservableBasis::pauli(b);
      for (std::size_t n : {64u, 256u}) {
        std::vector<double> norms;
        for (int rep = 0; rep < 300; ++rep) {
          norms.push_back(schatten_norm(rademacher_design_matrix(basis, n, derive_seed(b, {n, std::uint64_t(rep)})), kInfinity));
        }
        std::sort(norms.begin(), norms.end());
        for (double t : {1.0, 3.0, 5.0}) {
          const double level = 1 - std::exp(-t);
          const double quantile = norms[std::min<std::size_t>(norms.size() - 1, std::size_t(level * norms.size()))];
          CHECK(quantile <= bernstein_bound(1 / std::sqrt(double(basis.dim())), basis.u(), n, t, basis.dim()));
        }
      }
    }
  }

  TEST_CASE("gaussian data-law KL against a per-index brute force") {
    const auto basis = ObservableBasis::pauli(1);
    const double sigma = 0.3;
    const std::size_t n = 3;
    for (int k = 0; k < 20; ++k) {
      const auto a = haar_random_state(2, 1 + k % 2, 10 + k);
      const auto b = haar_random_state(2, 2, 50 + k);
      double brute = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        const auto e = oracle::pauli_dense(1, j);
        brute += 0.25 * gaussian_kl(oracle::trace_product(a.matrix(), e), sigma, oracle::trace_product(b.matrix(), e), sigma);
      }
      brute *= n;
      const auto kl = fano_kl_between_data_laws(Gaussian{sigma}, a, b, basis, n);
      CHECK(kl.value() == doctest::Approx(brute).epsilon(1e-10).scale(1.0));
      const double closed = n / (2 * sigma * sigma) * std::pow((a.matrix() - b.matrix()).frobenius(), 2) / 4;
      CHECK(kl.value() == doctest::Approx(closed).epsilon(1e-10).scale(1.0));
    }
    const auto a = haar_random_state(2, 1, 1);
    CHECK(fano_kl_between_data_laws(Gaussian{0.1}, a, a, basis, 5).value() == 0.0);
    CHECK(fano_kl_between_data_laws(Gaussian{0.0}, a, haar_random_state(2, 2, 2), basis, 5).is_infinite());
  }

  TEST_CASE("binary and standard data-law KL") {
    const auto basis = ObservableBasis::pauli(2);
    const double u_bar = 2 * basis.u();  // keeps probabilities in [1/4, 3/4]
    for (int k = 0; k < 30; ++k) {
      const auto a = haar_random_state(4, 1 + k % 4, 100 + k);
      const auto b = haar_random_state(4, 1 + (k + 1) % 4, 200 + k);
      const std::size_t n = 10;
      const double kl = fano_kl_between_data_laws(BoundedBinary{u_bar}, a, b, basis, n).value();
      const double l2pi_sq = std::pow((a.matrix() - b.matrix()).frobenius(), 2) / 16;
      CHECK(kl >= 0.0);
      CHECK(kl <= 3.0 * n / (u_bar * u_bar) * l2pi_sq + 1e-12);
    }
    const auto mixed = haar_random_state(4, 4, 7);
    const auto pure = haar_random_state(4, 1, 8);
    CHECK(fano_kl_between_data_laws(StandardQST{2}, mixed, mixed, basis, 4).value() == doctest::Approx(0.0).scale(1.0));
    const auto finite = fano_kl_between_data_laws(StandardQST{1}, pure, mixed, basis, 4);
    CHECK(finite.is_finite());
    CHECK(finite.value() > 0.0);
    CHECK(fano_kl_between_data_laws(StandardQST{2}, pure, mixed, basis, 4).value() ==
          doctest::Approx(2 * finite.value()));
  }

  TEST_CASE("flat vectors") {
    const auto small = find_flat_vector(ObservableBasis::pauli(1), 0.5, 64, 1);
    CHECK(small.exempt == std::vector<std::size_t>{0});
    double norm = 0.0;
    for (double x : small.v) norm += x * x;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-15));

    const auto basis = ObservableBasis::pauli(3);
    int found = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      const auto r = find_flat_vector(basis, 0.5, 64, 1000 + s);
      if (r.found) {
        ++found;
        CHECK(r.achieved <= r.threshold);
      }
    }
    CHECK(found >= 95);
    CHECK_THROWS_AS(find_flat_vector(basis, 1.0, 4, 1), ArgumentError);
  }
}
