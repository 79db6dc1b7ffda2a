#include "qst/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "qst/error.hpp"
#include "qst/rng.hpp"

namespace qst {

namespace {

constexpr std::uint32_t kSampleSubstream = 1;
constexpr std::uint32_t kRademacherSubstream = 2;

double parse_double(const std::string& s, const std::string& context) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ArgumentError(context + ": cannot parse '" + s + "'");
  return v;
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double draw(CounterRng& rng, const std::vector<Outcome>& law) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (const Outcome& o : law) {
    cumulative += o.probability;
    if (u < cumulative) return o.value;
  }
  // Rounding left the cumulative sum just below 1: take the last atom with mass.
  for (auto it = law.rbegin(); it != law.rend(); ++it) {
    if (it->probability > 0.0) return it->value;
  }
  return law.back().value;
}

// Pauli elements have eigenvalues +-u with P_+- = (I +- E/u)/2, so the law is
// determined by the Fourier coefficient alone. Identity has a single atom.
std::vector<Outcome> pauli_law(double coefficient, double u, std::size_t index) {
  if (index == 0) return {{u, 1.0}};
  const double alpha = std::clamp(coefficient / u, -1.0, 1.0);
  return {{u, 0.5 * (1.0 + alpha)}, {-u, 0.5 * (1.0 - alpha)}};
}

}  // namespace

void validate_model(const NoiseModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StandardQST>) {
          if (m.K < 1) throw ArgumentError("StandardQST: K must be >= 1");
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          if (!(m.sigma_xi >= 0.0) || !std::isfinite(m.sigma_xi)) {
            throw ArgumentError("Gaussian: sigma_xi must be finite and >= 0");
          }
        } else {
          if (!(m.u_bar > 0.0) || !std::isfinite(m.u_bar)) {
            throw ArgumentError("BoundedBinary: U_bar must be finite and > 0");
          }
        }
      },
      model);
}

std::string model_to_string(const NoiseModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StandardQST>) return "qst:" + std::to_string(m.K);
        else if constexpr (std::is_same_v<T, Gaussian>) return "gaussian:" + format_double(m.sigma_xi);
        else return "binary:" + format_double(m.u_bar);
      },
      model);
}

NoiseModel parse_model(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  NoiseModel model;
  if (kind == "qst" || kind == "standard") {
    int k = 1;
    if (!arg.empty()) {
      const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
      if (ec != std::errc() || ptr != arg.data() + arg.size()) {
        throw ArgumentError("model '" + text + "': K must be an integer");
      }
    }
    model = StandardQST{k};
  } else if (kind == "gaussian") {
    model = Gaussian{parse_double(arg, "model '" + text + "'")};
  } else if (kind == "binary") {
    model = BoundedBinary{parse_double(arg, "model '" + text + "'")};
  } else {
    throw ArgumentError("unknown noise model '" + text + "' (expected qst:K, gaussian:s, binary:U)");
  }
  validate_model(model);
  return model;
}

std::vector<Outcome> outcome_distribution(const DensityMatrix& rho, const HermitianMatrix& e) {
  if (rho.dim() != e.dim()) throw ArgumentError("outcome_distribution: dimension mismatch");
  const EigenDecomposition eig = eigh(e);
  const std::size_t m = e.dim();
  const double scale = std::max(1.0, std::abs(eig.eigenvalues.front()) + std::abs(eig.eigenvalues.back()));
  const HermitianMatrix& r = rho.matrix();

  std::vector<Outcome> law;
  std::size_t group_size = 0;
  double group_sum = 0.0;
  for (std::size_t col = 0; col < m; ++col) {
    const double lambda = eig.eigenvalues[col];
    // <v, rho v> for eigenvector column col.
    Complex acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      Complex rv = 0.0;
      for (std::size_t k = 0; k < m; ++k) rv += r(i, k) * eig.eigenvectors(k, col);
      acc += std::conj(eig.eigenvectors(i, col)) * rv;
    }
    const bool same = !law.empty() && std::abs(lambda - law.back().value) <= 1e-9 * scale;
    if (same) {
      ++group_size;
      group_sum += lambda;
      law.back().value = group_sum / static_cast<double>(group_size);
      law.back().probability += acc.real();
    } else {
      law.push_back({lambda, acc.real()});
      group_size = 1;
      group_sum = lambda;
    }
  }
  for (Outcome& o : law) o.probability = std::max(o.probability, 0.0);
  return law;
}

Dataset sample_dataset(const DensityMatrix& rho, const ObservableBasis& basis,
                       const NoiseModel& model, std::size_t n, std::uint64_t seed) {
  if (rho.dim() != basis.dim()) throw ArgumentError("sample_dataset: state and basis dimensions differ");
  if (n < 1) throw ArgumentError("sample_dataset: n must be >= 1");
  validate_model(model);

  const std::size_t d = basis.size();
  const std::vector<double> coef = basis.coefficients(rho.matrix());

  if (const auto* b = std::get_if<BoundedBinary>(&model)) {
    for (std::size_t j = 0; j < d; ++j) {
      const double p = 0.5 + coef[j] / (2.0 * b->u_bar);
      if (p < -1e-12 || p > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "BoundedBinary: probability " << p << " outside [0,1] at basis element " << j + 1
            << " (<rho,E> = " << coef[j] << ", U_bar = " << b->u_bar << ")";
        throw ModelError(msg.str());
      }
    }
  }

  Dataset out;
  out.basis_label = basis.label();
  out.m = basis.dim();
  out.model = model;
  out.seed = seed;
  out.records.resize(n);

  std::map<std::size_t, std::vector<Outcome>> laws;
  const bool pauli = basis.pauli_qubits().has_value();
  auto law_for = [&](std::size_t j) -> const std::vector<Outcome>& {
    auto it = laws.find(j);
    if (it == laws.end()) {
      it = laws.emplace(j, pauli ? pauli_law(coef[j], basis.u(), j)
                                 : outcome_distribution(rho, basis.element(j)))
               .first;
    }
    return it->second;
  };

  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i, kSampleSubstream);
    const std::size_t j = static_cast<std::size_t>(rng.below(d));
    double y = 0.0;
    if (const auto* q = std::get_if<StandardQST>(&model)) {
      const auto& law = law_for(j);
      double total = 0.0;
      for (int k = 0; k < q->K; ++k) total += draw(rng, law);
      y = total / q->K;
    } else if (const auto* g = std::get_if<Gaussian>(&model)) {
      y = g->sigma_xi == 0.0 ? coef[j] : coef[j] + g->sigma_xi * rng.normal();
    } else {
      const double u_bar = std::get<BoundedBinary>(model).u_bar;
      const double p = std::clamp(0.5 + coef[j] / (2.0 * u_bar), 0.0, 1.0);
      y = rng.uniform() < p ? u_bar : -u_bar;
    }
    out.records[i] = {j, y};
  }
  return out;
}

DataSummary summarize(const Dataset& data, const ObservableBasis& basis) {
  if (data.basis_label != basis.label() || data.m != basis.dim()) {
    throw ArgumentError("dataset basis '" + data.basis_label + "' does not match basis '" +
                        basis.label() + "'");
  }
  DataSummary s;
  s.n = data.size();
  s.counts.assign(basis.size(), 0.0);
  s.sums.assign(basis.size(), 0.0);
  for (const Record& r : data.records) {
    if (r.index >= basis.size()) throw ArgumentError("dataset: basis index out of range");
    if (!std::isfinite(r.outcome)) throw ArgumentError("dataset: non-finite outcome");
    s.counts[r.index] += 1.0;
    s.sums[r.index] += r.outcome;
    s.sum_squares += r.outcome * r.outcome;
  }
  for (const Record& r : data.records) {
    const double dev = r.outcome - s.sums[r.index] / s.counts[r.index];
    s.within_squares += dev * dev;
  }
  return s;
}

HermitianMatrix weighted_basis_sum(const Dataset& data, const ObservableBasis& basis, double scale) {
  DataSummary s = summarize(data, basis);
  if (s.n == 0) return HermitianMatrix(basis.dim());
  const double f = scale / static_cast<double>(s.n);
  for (double& w : s.sums) w *= f;
  return basis.combine(s.sums);
}

HermitianMatrix rademacher_design_matrix(const ObservableBasis& basis, std::size_t n,
                                         std::uint64_t seed) {
  if (n < 1) throw ArgumentError("rademacher_design_matrix: n must be >= 1");
  std::vector<double> w(basis.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i, kRademacherSubstream);
    const std::size_t j = static_cast<std::size_t>(rng.below(basis.size()));
    w[j] += rng.rademacher();
  }
  for (double& x : w) x /= static_cast<double>(n);
  return basis.combine(w);
}

}  // namespace qst
