#include <cmath>
#include <filesystem>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "qst/error.hpp"
#include "qst/sampler.hpp"
#include "qst/serialize.hpp"

using namespace qst;

TEST_SUITE("sampler") {
  TEST_CASE("model parsing round trips") {
    for (const char* s : {"qst:1", "qst:16", "gaussian:0.25", "binary:2"}) {
      CHECK(model_to_string(parse_model(s)) == s);
    }
    CHECK_THROWS_AS(validate_model(StandardQST{0}), ArgumentError);
    CHECK_THROWS_AS(validate_model(Gaussian{-1.0}), ArgumentError);
    CHECK_THROWS_AS(validate_model(BoundedBinary{0.0}), ArgumentError);
    CHECK_THROWS(parse_model("poisson:1"));
  }

  TEST_CASE("outcome laws on hand cases") {
    const auto basis = ObservableBasis::pauli(2);
    const auto mixed = DensityMatrix::maximally_mixed(4);
    for (std::size_t j = 1; j < basis.size(); ++j) {
      const auto law = outcome_distribution(mixed, basis.element(j));
      REQUIRE(law.size() == 2);
      for (const auto& o : law) {
        CHECK(std::abs(o.value) == doctest::Approx(0.5));
        CHECK(o.probability == doctest::Approx(0.5));
      }
    }
    const auto rho = haar_random_state(4, 2, 1);
    const auto first = outcome_distribution(rho, basis.element(0));
    REQUIRE(first.size() == 1);
    CHECK(first[0].value == doctest::Approx(0.5));
    CHECK(first[0].probability == doctest::Approx(1.0));
  }

  TEST_CASE("outcome law mean and variance match the closed form") {
    const auto basis = ObservableBasis::pauli(2);
    const auto rho = haar_random_state(4, 3, 2);
    const auto c = fourier_coefficients(rho, basis);
    for (std::size_t j = 1; j < basis.size(); ++j) {
      double mean = 0.0, second = 0.0;
      for (const auto& o : outcome_distribution(rho, basis.element(j))) {
        mean += o.probability * o.value;
        second += o.probability * o.value * o.value;
      }
      const double alpha = c[j] * 2.0;  // alpha_j = sqrt(m) <rho, E_j>
      CHECK(mean == doctest::Approx(c[j]).epsilon(1e-12).scale(1.0));
      CHECK(second - mean * mean == doctest::Approx((1 - alpha * alpha) / 4).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("noiseless gaussian data is exact") {
    const auto basis = ObservableBasis::pauli(2);
    const auto rho = haar_random_state(4, 2, 3);
    const auto c = fourier_coefficients(rho, basis);
    const auto d = sample_dataset(rho, basis, Gaussian{0.0}, 500, 4);
    CHECK(d.size() == 500);
    for (const auto& r : d.records) CHECK(r.outcome == doctest::Approx(c[r.index]).epsilon(1e-14).scale(1.0));
  }

  TEST_CASE("standard measurement outcomes and means") {
    const auto basis = ObservableBasis::pauli(2);
    const auto rho = haar_random_state(4, 1, 5);
    const auto c = fourier_coefficients(rho, basis);
    const auto d = sample_dataset(rho, basis, StandardQST{1}, 40000, 6);
    std::map<std::size_t, std::pair<double, double>> acc;
    for (const auto& r : d.records) {
      CHECK(std::abs(std::abs(r.outcome) - 0.5) <= 1e-12);
      acc[r.index].first += r.outcome;
      acc[r.index].second += 1;
    }
    CHECK(acc.size() == 16);
    for (const auto& [j, sc] : acc) {
      const double sigma = 0.5;
      CHECK(std::abs(sc.first / sc.second - c[j]) <= 4 * sigma / std::sqrt(sc.second));
    }
  }

  TEST_CASE("sampling is deterministic and prefix stable") {
    const auto basis = ObservableBasis::pauli(1);
    const auto rho = haar_random_state(2, 1, 7);
    const auto a = sample_dataset(rho, basis, Gaussian{0.3}, 100, 8);
    const auto b = sample_dataset(rho, basis, Gaussian{0.3}, 60, 8);
    for (std::size_t i = 0; i < 60; ++i) {
      CHECK(a.records[i].index == b.records[i].index);
      CHECK(a.records[i].outcome == b.records[i].outcome);
    }
  }

  TEST_CASE("binary model") {
    const auto basis = ObservableBasis::pauli(1);
    const auto rho = haar_random_state(2, 2, 9);
    const auto d = sample_dataset(rho, basis, BoundedBinary{2.0}, 1000, 10);
    for (const auto& r : d.records) CHECK(std::abs(r.outcome) == 2.0);
    const auto pure = haar_random_state(2, 1, 11);
    try {
      sample_dataset(pure, basis, BoundedBinary{0.1}, 10, 1);
      FAIL("expected ModelError");
    } catch (const ModelError& e) {
      CHECK(std::string(e.what()).find("element 1 ") != std::string::npos);
    }
  }

  TEST_CASE("weighted sums and design matrices") {
    const auto basis = ObservableBasis::pauli(2);
    Dataset zero;
    zero.basis_label = basis.label();
    zero.m = 4;
    zero.records = {{1, 0.0}, {5, 0.0}};
    CHECK(weighted_basis_sum(zero, basis, 1.0).frobenius() == 0.0);
    Dataset two = zero;
    two.records = {{1, 1.0}, {5, -2.0}};
    const auto w = weighted_basis_sum(two, basis, 3.0);
    const auto expect = 1.5 * (oracle::pauli_dense(2, 1) - 2.0 * oracle::pauli_dense(2, 5));
    CHECK(max_abs_diff(w.entries(), expect.entries()) <= 1e-14);

    const auto one = rademacher_design_matrix(basis, 1, 3);
    bool matched = false;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto e = basis.element(j);
      matched |= max_abs_diff(one.entries(), e.entries()) <= 1e-15 ||
                 max_abs_diff(one.entries(), (-1.0 * e).entries()) <= 1e-15;
    }
    CHECK(matched);

    // || E X^2 ||_inf = 1/m under uniform sampling.
    for (int b = 1; b <= 3; ++b) {
      const auto pb = ObservableBasis::pauli(b);
      HermitianMatrix acc(pb.dim());
      for (std::size_t j = 0; j < pb.size(); ++j) acc += HermitianMatrix(pb.element(j).entries() * pb.element(j).entries());
      acc *= 1.0 / pb.size();
      CHECK(schatten_norm(acc, kInfinity) == doctest::Approx(1.0 / pb.dim()));
    }
  }

  TEST_CASE("summaries") {
    const auto basis = ObservableBasis::pauli(1);
    Dataset d;
    d.basis_label = basis.label();
    d.m = 2;
    d.records = {{0, 1.0}, {0, 3.0}, {2, -1.0}};
    const auto s = summarize(d, basis);
    CHECK(s.n == 3);
    CHECK(s.counts[0] == 2);
    CHECK(s.sums[0] == 4.0);
    CHECK(s.sum_squares == 11.0);
    CHECK(s.within_squares == doctest::Approx(2.0));
    d.basis_label = "other";
    CHECK_THROWS_AS(summarize(d, basis), ArgumentError);
  }

  TEST_CASE("dataset CSV round trip") {
    const auto basis = ObservableBasis::pauli(2);
    const auto d = sample_dataset(haar_random_state(4, 2, 12), basis, Gaussian{0.1}, 50, 13);
    const auto path = (std::filesystem::temp_directory_path() / "qst_dataset_test.csv").string();
    write_dataset(path, d);
    const auto e = read_dataset(path);
    CHECK(e.basis_label == d.basis_label);
    CHECK(e.m == 4);
    CHECK(e.seed == 13);
    CHECK(model_to_string(e.model) == "gaussian:0.1");
    REQUIRE(e.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(e.records[i].index == d.records[i].index);
      CHECK(e.records[i].outcome == d.records[i].outcome);
    }
    std::filesystem::remove(path + ".json");
    CHECK_THROWS_AS(read_dataset(path), ArgumentError);
    std::filesystem::remove(path);
  }
}
