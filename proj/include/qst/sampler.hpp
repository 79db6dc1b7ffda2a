#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qst/basis.hpp"
#include "qst/state.hpp"

namespace qst {

/// Each outcome is the mean of K eigenvalue draws for one sampled index.
struct StandardQST {
  int K = 1;
};
/// Y = <rho, X> + N(0, sigma_xi^2).
struct Gaussian {
  double sigma_xi = 0.0;
};
/// Y = +U_bar with probability 1/2 + <rho, X>/(2 U_bar), else -U_bar.
struct BoundedBinary {
  double u_bar = 1.0;
};

using NoiseModel = std::variant<StandardQST, Gaussian, BoundedBinary>;

/// Throws ArgumentError when a parameter is outside its range.
void validate_model(const NoiseModel& model);

/// "qst:K", "gaussian:sigma" or "binary:U_bar", round-trippable.
std::string model_to_string(const NoiseModel& model);
NoiseModel parse_model(const std::string& text);

struct Record {
  std::size_t index = 0;  // 0-based basis index
  double outcome = 0.0;
};

struct Dataset {
  std::string basis_label;
  std::size_t m = 0;
  std::vector<Record> records;
  NoiseModel model;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return records.size(); }
};

struct Outcome {
  double value = 0.0;
  double probability = 0.0;
};

/// Born-rule law of measuring E in state rho: distinct eigenvalues of E
/// (grouped within 1e-9 relative) with probabilities tr(rho P_j).
std::vector<Outcome> outcome_distribution(const DensityMatrix& rho, const HermitianMatrix& e);

/// n i.i.d. records. Record i draws from its own RNG stream, so the output
/// depends only on (rho, basis, model, n, seed). With K > 1 the K draws of
/// one record share the sampled index.
Dataset sample_dataset(const DensityMatrix& rho, const ObservableBasis& basis,
                       const NoiseModel& model, std::size_t n, std::uint64_t seed);

/// scale * n^-1 * sum_i Y_i E_{j_i}.
HermitianMatrix weighted_basis_sum(const Dataset& data, const ObservableBasis& basis, double scale);

/// n^-1 sum_i eps_i E_{j_i}, uniform indices and independent signs.
HermitianMatrix rademacher_design_matrix(const ObservableBasis& basis, std::size_t n,
                                         std::uint64_t seed);

/// Per-index counts and outcome sums; everything the quadratic loss needs.
struct DataSummary {
  std::size_t n = 0;
  std::vector<double> counts;
  std::vector<double> sums;
  double sum_squares = 0.0;
  /// sum_i (Y_i - mean outcome at j_i)^2, the part of the loss no S can remove.
  double within_squares = 0.0;
};

DataSummary summarize(const Dataset& data, const ObservableBasis& basis);

}  // namespace qst
