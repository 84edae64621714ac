#include "dfrep/scenario.hpp"

#include <cmath>

#include <json.hpp>

namespace dfrep::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "not finite");
  return x;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Vector complex_vector(const json& v, Index dim, const std::string& path) {
  const std::vector<double> re = number_list(member(v, "re", path), path + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (v.contains("im")) im = number_list(v.at("im"), path + ".im");
  if (static_cast<Index>(re.size()) != dim || static_cast<Index>(im.size()) != dim)
    fail(path, "dimension inconsistent, expected " + std::to_string(dim) + " entries");
  Vector out(dim);
  for (Index i = 0; i < dim; ++i) out(i) = cplx(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
  return out;
}

Matrix real_matrix(const json& v, Index dim, const std::string& path) {
  if (!v.is_array() || static_cast<Index>(v.size()) != dim)
    fail(path, "dimension inconsistent, expected " + std::to_string(dim) + " rows");
  Matrix out(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const std::vector<double> row = number_list(v[static_cast<std::size_t>(r)], row_path);
    if (static_cast<Index>(row.size()) != dim)
      fail(row_path, "dimension inconsistent, expected " + std::to_string(dim) + " columns");
    for (Index c = 0; c < dim; ++c) out(r, c) = row[static_cast<std::size_t>(c)];
  }
  return out;
}

Matrix complex_matrix(const json& v, Index dim, const std::string& path) {
  Matrix out = real_matrix(member(v, "re", path), dim, path + ".re");
  if (v.contains("im")) out += cplx(0.0, 1.0) * real_matrix(v.at("im"), dim, path + ".im");
  return out;
}

json to_json(const Vector& v) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

json to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

FunctionalKind parse_kind(const json& v) {
  if (!v.is_string()) fail("functional.kind", "expected a string");
  const std::string s = v.get<std::string>();
  if (s == "operator") return FunctionalKind::operator_backed;
  if (s == "pure_state") return FunctionalKind::pure_state;
  if (s == "form") return FunctionalKind::form_backed;
  if (s == "class_operator") return FunctionalKind::class_operator;
  fail("functional.kind", "unknown kind '" + s + "'");
}

histories::ClassOperatorModel parse_model(const json& v, Index dim) {
  histories::ClassOperatorModel model;
  model.dim = dim;
  const auto& rho = member(v, "rho", "functional.model");
  model.rho = complex_matrix(rho, dim, "rho");
  // Named fields first so the most common mistakes produce the short path.
  const cplx tr = model.rho.trace();
  if (std::abs(tr - cplx(1.0)) > 1e-9) fail("rho", "trace is " + std::to_string(tr.real()) + ", expected 1");
  model.hamiltonian = complex_matrix(member(v, "hamiltonian", "functional.model"), dim, "hamiltonian");
  model.times = number_list(member(v, "times", "functional.model"), "times");
  const json& schedules = member(v, "schedules", "functional.model");
  if (!schedules.is_array()) fail("schedules", "expected an array");
  for (std::size_t k = 0; k < schedules.size(); ++k) {
    const std::string path = "schedules[" + std::to_string(k) + "]";
    if (!schedules[k].is_array()) fail(path, "expected an array of projections");
    std::vector<Projection> decomposition;
    for (std::size_t j = 0; j < schedules[k].size(); ++j) {
      const std::string ppath = path + "[" + std::to_string(j) + "]";
      Matrix m = complex_matrix(schedules[k][j], dim, ppath);
      try {
        decomposition.push_back(Projection::from_matrix(std::move(m)));
      } catch (const ValidationError& e) {
        fail(ppath, e.what());
      }
    }
    model.schedules.push_back(std::move(decomposition));
  }
  model.validate();
  return model;
}

}  // namespace

std::string_view to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::operator_backed: return "operator";
    case FunctionalKind::pure_state: return "pure_state";
    case FunctionalKind::form_backed: return "form";
    default: return "class_operator";
  }
}

bool Scenario::operator==(const Scenario& other) const {
  if (dimension != other.dimension || kind != other.kind || seed != other.seed || tolerances != other.tolerances ||
      sweep_dims != other.sweep_dims)
    return false;
  switch (kind) {
    case FunctionalKind::operator_backed: return operator_entries == other.operator_entries;
    case FunctionalKind::pure_state: return psi == other.psi;
    case FunctionalKind::form_backed: return gram == other.gram;
    case FunctionalKind::class_operator: {
      const auto& a = model;
      const auto& b = other.model;
      if (a.dim != b.dim || a.rho != b.rho || a.hamiltonian != b.hamiltonian || a.times != b.times ||
          a.schedules.size() != b.schedules.size())
        return false;
      for (std::size_t k = 0; k < a.schedules.size(); ++k) {
        if (a.schedules[k].size() != b.schedules[k].size()) return false;
        for (std::size_t j = 0; j < a.schedules[k].size(); ++j)
          if (a.schedules[k][j].matrix() != b.schedules[k][j].matrix()) return false;
      }
      return true;
    }
  }
  return false;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("scenario", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("scenario", "expected a JSON object");

  Scenario sc;
  const json& dim = member(doc, "dimension", "");
  if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > kMaxHilbertDim)
    fail("dimension", "expected an integer in [1, 64]");
  sc.dimension = dim.get<Index>();

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      fail("seed", "expected a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    const auto read = [&](const char* key, double& slot) {
      if (t.contains(key)) {
        slot = number(t.at(key), std::string("tolerances.") + key);
        if (slot < 0.0) fail(std::string("tolerances.") + key, "must be non-negative");
      }
    };
    read("axiom", sc.tolerances.axiom);
    read("condition", sc.tolerances.condition);
    read("consistency", sc.tolerances.consistency);
    read("fidelity", sc.tolerances.fidelity);
  }
  if (doc.contains("sweep_dims")) {
    const json& dims = doc.at("sweep_dims");
    if (!dims.is_array()) fail("sweep_dims", "expected an array");
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (!dims[i].is_number_integer() || dims[i].get<long long>() < 1)
        fail("sweep_dims[" + std::to_string(i) + "]", "expected a positive integer");
      sc.sweep_dims.push_back(dims[i].get<Index>());
    }
  }

  const json& fn = member(doc, "functional", "");
  sc.kind = parse_kind(member(fn, "kind", "functional"));
  const Index n = sc.dimension;
  switch (sc.kind) {
    case FunctionalKind::operator_backed:
      sc.operator_entries = complex_matrix(member(fn, "operator", "functional"), n * n, "functional.operator");
      break;
    case FunctionalKind::pure_state:
      sc.psi = complex_vector(member(fn, "psi", "functional"), n, "functional.psi");
      if (std::abs(sc.psi.norm() - 1.0) > kProjectionTol) fail("functional.psi", "not a unit vector");
      break;
    case FunctionalKind::form_backed:
      sc.gram = complex_matrix(member(fn, "gram", "functional"), n * n, "functional.gram");
      break;
    case FunctionalKind::class_operator:
      sc.model = parse_model(member(fn, "model", "functional"), n);
      break;
  }
  return sc;
}

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["dimension"] = sc.dimension;
  doc["seed"] = sc.seed;
  doc["tolerances"] = {{"axiom", sc.tolerances.axiom},
                       {"condition", sc.tolerances.condition},
                       {"consistency", sc.tolerances.consistency},
                       {"fidelity", sc.tolerances.fidelity}};
  if (!sc.sweep_dims.empty()) doc["sweep_dims"] = sc.sweep_dims;
  json fn;
  fn["kind"] = std::string(to_string(sc.kind));
  switch (sc.kind) {
    case FunctionalKind::operator_backed: fn["operator"] = to_json(sc.operator_entries); break;
    case FunctionalKind::pure_state: fn["psi"] = to_json(sc.psi); break;
    case FunctionalKind::form_backed: fn["gram"] = to_json(sc.gram); break;
    case FunctionalKind::class_operator: {
      json model;
      model["rho"] = to_json(sc.model.rho);
      model["hamiltonian"] = to_json(sc.model.hamiltonian);
      model["times"] = sc.model.times;
      json schedules = json::array();
      for (const auto& decomposition : sc.model.schedules) {
        json list = json::array();
        for (const Projection& p : decomposition) list.push_back(to_json(p.matrix()));
        schedules.push_back(list);
      }
      model["schedules"] = schedules;
      fn["model"] = model;
      break;
    }
  }
  doc["functional"] = fn;
  return doc.dump(2) + "\n";
}

DecoherenceFunctional build_functional(const Scenario& sc) {
  switch (sc.kind) {
    case FunctionalKind::operator_backed: return DecoherenceFunctional::operator_backed(sc.operator_entries);
    case FunctionalKind::pure_state: return DecoherenceFunctional::pure_state(sc.psi);
    case FunctionalKind::form_backed: return DecoherenceFunctional::form_backed(sc.gram);
    case FunctionalKind::class_operator: return histories::standard_df(sc.model);
  }
  throw ValidationError("functional.kind: unsupported");
}

}  // namespace dfrep::cli
