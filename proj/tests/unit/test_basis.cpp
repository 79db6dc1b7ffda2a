#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "qst/basis.hpp"
#include "qst/error.hpp"
#include "qst/serialize.hpp"

using namespace qst;

TEST_SUITE("basis") {
  TEST_CASE("pauli elements equal hand-built Kronecker products") {
    for (int b = 1; b <= 3; ++b) {
      const auto basis = ObservableBasis::pauli(b);
      CHECK(basis.dim() == (std::size_t{1} << b));
      CHECK(basis.pauli_qubits() == b);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        CHECK(max_abs_diff(basis.element(j).entries(), oracle::pauli_dense(b, j).entries()) <= 1e-15);
      }
    }
    CHECK_THROWS_AS(ObservableBasis::pauli(0), ArgumentError);
    CHECK_THROWS_AS(ObservableBasis::pauli(9), ArgumentError);
  }

  TEST_CASE("orthonormality, spectra and traces") {
    const auto basis = ObservableBasis::pauli(2);
    const auto rep = validate_basis(basis, 0.1);
    CHECK(rep.max_orthonormality_deviation <= 1e-12);
    CHECK(rep.orthonormal());
    CHECK(basis.u() == doctest::Approx(0.5));
    CHECK(rep.trace_violators == std::vector<std::size_t>{0});
    CHECK(basis.element(0).trace() == doctest::Approx(2.0));
    for (std::size_t j = 1; j < basis.size(); ++j) {
      CHECK(std::abs(basis.element(j).trace()) <= 1e-15);
      for (double l : eigh(basis.element(j)).eigenvalues) CHECK(std::abs(l) == doctest::Approx(0.5));
    }
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t k = 0; k < basis.size(); ++k)
        CHECK(hs_inner(basis.element(j), basis.element(k)) == doctest::Approx(j == k ? 1.0 : 0.0).scale(1.0));
  }

  TEST_CASE("coefficients and combine round trip") {
    std::mt19937_64 g(31);
    for (int b = 1; b <= 4; ++b) {
      const auto basis = ObservableBasis::pauli(b);
      const auto a = oracle::random_hermitian(basis.dim(), g);
      const auto c = basis.coefficients(a);
      for (std::size_t j = 0; j < std::min<std::size_t>(basis.size(), 20); ++j) {
        CHECK(c[j] == doctest::Approx(oracle::trace_product(a, oracle::pauli_dense(b, j))).epsilon(1e-12).scale(1.0));
      }
      CHECK(max_abs_diff(basis.combine(c).entries(), a.entries()) <= 1e-12);
    }
  }

  TEST_CASE("fourier coefficients of a state") {
    const auto basis = ObservableBasis::pauli(3);
    const auto rho = haar_random_state(8, 2, 3);
    const auto c = fourier_coefficients(rho, basis);
    double sq = 0.0;
    for (double x : c) sq += x * x;
    CHECK(sq == doctest::Approx(std::pow(rho.matrix().frobenius(), 2)).epsilon(1e-12));
    CHECK(sq <= 1.0 + 1e-12);
    CHECK(c[0] == doctest::Approx(1.0 / std::sqrt(8.0)));
    CHECK_THROWS_AS(fourier_coefficients(haar_random_state(4, 1, 1), basis), ArgumentError);
  }

  TEST_CASE("custom bases from elements and JSON") {
    const auto pauli = ObservableBasis::pauli(1);
    std::vector<HermitianMatrix> elems;
    for (std::size_t j = 0; j < 4; ++j) elems.push_back(pauli.element(j));
    const auto custom = ObservableBasis::from_elements(elems, "copy");
    CHECK(custom.u() == doctest::Approx(pauli.u()));
    CHECK(validate_basis(custom, 0.1).orthonormal());

    Json j;
    j["label"] = "file-basis";
    for (const auto& e : elems) j["elements"].push_back(to_json(e));
    const auto path = (std::filesystem::temp_directory_path() / "qst_basis_test.json").string();
    write_json_file(path, j);
    const auto loaded = load_basis(path);
    CHECK(loaded.label() == "file-basis");
    CHECK(max_abs_diff(loaded.element(2).entries(), pauli.element(2).entries()) <= 1e-15);

    // A duplicated element breaks orthonormality and must be reported.
    elems[3] = elems[2];
    const auto broken = ObservableBasis::from_elements(elems, "dup");
    const auto rep = validate_basis(broken, 0.1);
    CHECK_FALSE(rep.orthonormal());
    CHECK(rep.max_orthonormality_deviation == doctest::Approx(1.0));
    Json bad;
    bad["label"] = "dup";
    for (const auto& e : elems) bad["elements"].push_back(to_json(e));
    write_json_file(path, bad);
    CHECK_THROWS_AS(load_basis(path), ArgumentError);
    std::filesystem::remove(path);

    CHECK(load_basis("pauli:2").dim() == 4);
    CHECK_THROWS(load_basis("pauli:x"));
  }
}
