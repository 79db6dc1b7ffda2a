#include "qst/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qst/error.hpp"
#include "qst/rng.hpp"

namespace qst {

Json to_json(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (std::size_t j = 0; j < n; ++j) {
      rr.push_back(a(i, j).real());
      ri.push_back(a(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"dim", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Json to_json(const DensityMatrix& rho) {
  Json j = to_json(rho.matrix());
  j["kind"] = "density_matrix";
  return j;
}

HermitianMatrix hermitian_from_json(const Json& j) {
  try {
    const std::size_t n = j.at("dim").get<std::size_t>();
    const Json& re = j.at("re");
    const Json empty;
    const Json& im = j.contains("im") ? j.at("im") : empty;
    if (!re.is_array() || re.size() != n) throw ArgumentError("matrix JSON: 're' must have dim rows");
    ComplexMatrix c(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (re[r].size() != n) throw ArgumentError("matrix JSON: ragged 're' row");
      if (!im.is_null() && im[r].size() != n) throw ArgumentError("matrix JSON: ragged 'im' row");
      for (std::size_t col = 0; col < n; ++col) {
        const double x = re[r][col].get<double>();
        const double y = im.is_null() ? 0.0 : im[r][col].get<double>();
        c.set(r, col, {x, y});
      }
    }
    return HermitianMatrix(c);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("matrix JSON: ") + e.what());
  }
}

DensityMatrix density_from_json(const Json& j) { return validate_density(hermitian_from_json(j)); }

ObservableBasis basis_from_json(const Json& j, const std::string& fallback_label) {
  if (!j.contains("elements") || !j.at("elements").is_array()) {
    throw ArgumentError("basis JSON: missing 'elements' array");
  }
  std::vector<HermitianMatrix> elements;
  for (const Json& e : j.at("elements")) elements.push_back(hermitian_from_json(e));
  std::string label = j.value("label", fallback_label);
  return ObservableBasis::from_elements(std::move(elements), std::move(label));
}

void write_dataset(const std::string& csv_path, const Dataset& data) {
  std::ofstream out(csv_path);
  if (!out) throw ArgumentError("cannot write '" + csv_path + "'");
  out << "index,outcome\n";
  char buf[64];
  for (const Record& r : data.records) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", r.index + 1, r.outcome);
    out << buf;
  }
  if (!out) throw ArgumentError("write to '" + csv_path + "' failed");
  write_json_file(csv_path + ".json", Json{{"basis_label", data.basis_label},
                                           {"m", data.m},
                                           {"model", model_to_string(data.model)},
                                           {"seed", data.seed},
                                           {"n", data.size()},
                                           {"rng", std::string(kRngVersion)}});
}

Dataset read_dataset(const std::string& csv_path) {
  const Json meta = read_json_file(csv_path + ".json");
  Dataset data;
  try {
    data.basis_label = meta.at("basis_label").get<std::string>();
    data.m = meta.at("m").get<std::size_t>();
    data.model = parse_model(meta.at("model").get<std::string>());
    data.seed = meta.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("dataset sidecar '" + csv_path + ".json': " + e.what());
  }
  std::ifstream in(csv_path);
  if (!in) throw ArgumentError("cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "index,outcome") {
    throw ArgumentError("'" + csv_path + "': expected header 'index,outcome'");
  }
  const std::size_t d = data.m * data.m;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t index = 0;
    double outcome = 0.0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%zu,%lf%c", &index, &outcome, &tail) != 2 || index < 1 ||
        index > d) {
      throw ArgumentError("'" + csv_path + "' line " + std::to_string(lineno) + ": bad record '" +
                          line + "'");
    }
    data.records.push_back({index - 1, outcome});
  }
  return data;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qst
