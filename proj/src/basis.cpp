#include "qst/basis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qst/error.hpp"
#include "qst/kernels.hpp"
#include "qst/serialize.hpp"

namespace qst {

namespace {

// Single-qubit factors in basis order I, sigma_y, sigma_x, sigma_z. Each is a
// signed permutation: row b maps to column b ^ flip, with entry i^phase.
constexpr unsigned kFlip[4] = {0, 1, 1, 0};
constexpr unsigned kPhase[4][2] = {{0, 0}, {3, 1}, {0, 0}, {0, 2}};

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct PauliString {
  std::size_t xmask = 0;
  std::vector<unsigned char> phase;  // per row, power of i
};

PauliString pauli_string(int qubits, std::size_t j) {
  const std::size_t m = std::size_t{1} << qubits;
  PauliString s;
  s.phase.assign(m, 0);
  std::size_t rest = j;
  // Last digit belongs to the last (least significant) qubit.
  for (int k = qubits - 1; k >= 0; --k) {
    const unsigned f = static_cast<unsigned>(rest % 4);
    rest /= 4;
    const int bit = qubits - 1 - k;
    s.xmask |= static_cast<std::size_t>(kFlip[f]) << bit;
    for (std::size_t r = 0; r < m; ++r) {
      s.phase[r] = static_cast<unsigned char>((s.phase[r] + kPhase[f][(r >> bit) & 1u]) & 3u);
    }
  }
  return s;
}

double operator_norm(const HermitianMatrix& e) { return schatten_norm(e, kInfinity); }

}  // namespace

ObservableBasis ObservableBasis::pauli(int qubits) {
  if (qubits < 1 || qubits > 8) throw ArgumentError("pauli_basis: qubit count must lie in [1, 8]");
  ObservableBasis b;
  b.dim_ = std::size_t{1} << qubits;
  b.u_ = 1.0 / std::sqrt(static_cast<double>(b.dim_));
  b.label_ = "pauli:" + std::to_string(qubits);
  b.qubits_ = qubits;
  return b;
}

ObservableBasis ObservableBasis::from_elements(std::vector<HermitianMatrix> elements,
                                               std::string label) {
  if (elements.empty()) throw ArgumentError("basis: no elements");
  const std::size_t m = elements.front().dim();
  if (elements.size() != m * m) {
    throw ArgumentError("basis: expected m^2 = " + std::to_string(m * m) + " elements, got " +
                        std::to_string(elements.size()));
  }
  double u = 0.0;
  for (const auto& e : elements) {
    if (e.dim() != m) throw ArgumentError("basis: elements of differing dimension");
    u = std::max(u, operator_norm(e));
  }
  ObservableBasis b;
  b.dim_ = m;
  b.u_ = u;
  b.label_ = std::move(label);
  b.dense_ = std::make_shared<const std::vector<HermitianMatrix>>(std::move(elements));
  return b;
}

HermitianMatrix ObservableBasis::element(std::size_t j) const {
  if (j >= size()) throw ArgumentError("basis: element index out of range");
  if (dense_) return (*dense_)[j];
  const PauliString s = pauli_string(*qubits_, j);
  ComplexMatrix e(dim_);
  for (std::size_t r = 0; r < dim_; ++r) e.set(r, r ^ s.xmask, u_ * kIPow[s.phase[r]]);
  return HermitianMatrix(e);
}

std::vector<double> ObservableBasis::coefficients(const HermitianMatrix& a) const {
  if (a.dim() != dim_) throw ArgumentError("basis coefficients: dimension mismatch");
  std::vector<double> out(size());
  if (dense_) {
    for (std::size_t j = 0; j < size(); ++j) out[j] = hs_inner(a, (*dense_)[j]);
    return out;
  }
  const auto re = a.entries().re();
  const auto im = a.entries().im();
  for (std::size_t j = 0; j < size(); ++j) {
    const PauliString s = pauli_string(*qubits_, j);
    // tr(A E) = sum_r A[r][r^x] E[r^x][r], with E[r^x][r] = u i^phase(r^x).
    double acc = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      const std::size_t c = r ^ s.xmask;
      const Complex e = kIPow[s.phase[c]];
      acc += re[r * dim_ + c] * e.real() - im[r * dim_ + c] * e.imag();
    }
    out[j] = u_ * acc;
  }
  return out;
}

HermitianMatrix ObservableBasis::combine(std::span<const double> weights) const {
  if (weights.size() != size()) throw ArgumentError("basis combine: weight count != m^2");
  if (dense_) {
    HermitianMatrix out(dim_);
    for (std::size_t j = 0; j < size(); ++j) {
      if (weights[j] != 0.0) out.add_scaled(weights[j], (*dense_)[j]);
    }
    return out;
  }
  ComplexMatrix out(dim_);
  auto re = out.re();
  auto im = out.im();
  for (std::size_t j = 0; j < size(); ++j) {
    const double w = weights[j];
    if (w == 0.0) continue;
    const PauliString s = pauli_string(*qubits_, j);
    for (std::size_t r = 0; r < dim_; ++r) {
      const Complex e = kIPow[s.phase[r]];
      const std::size_t idx = r * dim_ + (r ^ s.xmask);
      re[idx] += w * u_ * e.real();
      im[idx] += w * u_ * e.imag();
    }
  }
  return HermitianMatrix(out);
}

ValidationReport validate_basis(const ObservableBasis& basis, double gamma) {
  ValidationReport report;
  const std::size_t m = basis.dim();
  report.element_count = basis.size();
  report.expected_count = m * m;
  report.declared_u = basis.u();
  report.gamma = gamma;

  std::vector<HermitianMatrix> elements;
  elements.reserve(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) elements.push_back(basis.element(j));

  for (std::size_t j = 0; j < elements.size(); ++j) {
    for (std::size_t k = j; k < elements.size(); ++k) {
      const double target = j == k ? 1.0 : 0.0;
      report.max_orthonormality_deviation =
          std::max(report.max_orthonormality_deviation,
                   std::abs(hs_inner(elements[j], elements[k]) - target));
    }
    report.measured_u = std::max(report.measured_u, operator_norm(elements[j]));
  }
  const double bound = (1.0 - gamma) * report.measured_u * static_cast<double>(m);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (std::abs(elements[k].trace()) > bound) report.trace_violators.push_back(k);
  }
  return report;
}

std::vector<double> fourier_coefficients(const DensityMatrix& rho, const ObservableBasis& basis) {
  if (rho.dim() != basis.dim()) throw ArgumentError("fourier_coefficients: dimension mismatch");
  return basis.coefficients(rho.matrix());
}

ObservableBasis load_basis(const std::string& spec) {
  if (spec.rfind("pauli:", 0) == 0) {
    int b = 0;
    try {
      b = std::stoi(spec.substr(6));
    } catch (const std::exception&) {
      throw ArgumentError("basis spec '" + spec + "': expected pauli:<qubits>");
    }
    return ObservableBasis::pauli(b);
  }
  ObservableBasis basis = basis_from_json(read_json_file(spec), spec);
  const ValidationReport report = validate_basis(basis, 0.0);
  if (!report.orthonormal()) {
    std::ostringstream msg;
    msg << "basis file '" << spec << "' is not orthonormal (deviation "
        << report.max_orthonormality_deviation << ", " << report.element_count << " elements)";
    throw ArgumentError(msg.str());
  }
  return basis;
}

}  // namespace qst
