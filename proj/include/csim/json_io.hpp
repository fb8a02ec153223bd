#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "csim/classify.hpp"
#include "csim/moments.hpp"
#include "csim/similarity.hpp"

// JSON encodings. Complex numbers are two-element arrays [re, im] of doubles
// (nlohmann writes the shortest decimal that round-trips). Extended-precision
// quantities carry an extra "*_hp" companion with full-precision decimal
// strings, which takes priority when read back.
namespace csim::io {

using json = nlohmann::json;

inline json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("complex number must be a two-element array [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::string hp_string(const hp_real& x) { return x.str(0, std::ios_base::scientific); }

inline hp_real hp_from_string(const json& j) {
  if (!j.is_string()) throw InputError("extended-precision value must be a decimal string");
  try {
    return hp_real(j.get<std::string>());
  } catch (const std::exception&) {
    throw InputError("malformed extended-precision value: " + j.get<std::string>());
  }
}

inline json hp_to_json(const hp_complex& z) { return json::array({hp_string(z.real()), hp_string(z.imag())}); }

inline hp_complex hp_complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("extended complex must be [re, im] strings");
  return {hp_from_string(j[0]), hp_from_string(j[1])};
}

inline json vector_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("vector must be a non-empty array of [re, im]");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline json rows_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix rows_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix rows must be a non-empty array");
  const auto n = j.size();
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw InputError("matrix must be square");
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
  }
  return m;
}

template <class Range>
json complex_list(const Range& values) {
  json a = json::array();
  for (const auto& v : values) a.push_back(to_json(to_cplx(v)));
  return a;
}

inline std::vector<cplx> complex_list_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of [re, im]");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

inline json to_json(const Tridiagonal& t) {
  return {{"d", t.dim()}, {"kind", "tridiagonal"}, {"diag", complex_list(t.diag)}, {"offdiag", complex_list(t.offdiag)}};
}

inline json dense_to_json(const CMatrix& m) { return {{"d", m.rows()}, {"kind", "dense"}, {"rows", rows_to_json(m)}}; }

/// Operator file, optionally carrying a conjugation "C" and a vector "x0".
struct OperatorInput {
  CMatrix dense;
  std::optional<Tridiagonal> tridiagonal;  // present for kind "tridiagonal"
  std::optional<Conjugation> conjugation;
  std::optional<CVector> x0;

  std::size_t dim() const { return static_cast<std::size_t>(dense.rows()); }
};

inline OperatorInput operator_from_json(const json& j) {
  if (!j.is_object()) throw InputError("operator must be a JSON object");
  const auto kind = j.value("kind", std::string("dense"));
  OperatorInput in;
  if (kind == "tridiagonal") {
    if (!j.contains("diag") || !j.contains("offdiag")) throw InputError("tridiagonal operator needs diag and offdiag");
    Tridiagonal t(complex_list_from_json(j["diag"], "diag"), complex_list_from_json(j["offdiag"], "offdiag"));
    in.dense = t.dense();
    in.tridiagonal = std::move(t);
  } else if (kind == "dense") {
    if (!j.contains("rows")) throw InputError("dense operator needs rows");
    in.dense = rows_from_json(j["rows"]);
  } else {
    throw InputError("unknown operator kind: " + kind);
  }
  if (j.contains("d") && (!j["d"].is_number_integer() || j["d"].get<long long>() != in.dense.rows()))
    throw InputError("field d does not match the operator size");
  if (in.dense.rows() < 2) throw InputError("operator dimension must be at least 2");
  if (j.contains("C")) {
    const auto& c = j["C"].is_object() ? j["C"].at("C") : j["C"];
    in.conjugation = Conjugation(rows_from_json(c));
    if (in.conjugation->dim() != in.dim()) throw InputError("conjugation dimension differs from operator");
  }
  if (j.contains("x0")) {
    in.x0 = vector_from_json(j["x0"]);
    if (static_cast<std::size_t>(in.x0->size()) != in.dim()) throw InputError("x0 dimension differs from operator");
  }
  return in;
}

inline json conjugation_to_json(const Conjugation& c) { return {{"C", rows_to_json(c.matrix())}}; }

template <class C>
json to_json(const AtomicMeasure<C>& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    json e = {{"z", to_json(to_cplx(a.z))}, {"mass", to_double(a.mass)}};
    if constexpr (is_extended_v<C>) {
      e["z_hp"] = hp_to_json(a.z);
      e["mass_hp"] = hp_string(a.mass);
    }
    atoms.push_back(std::move(e));
  }
  return {{"atoms", std::move(atoms)}};
}

template <class C = hp_complex>
AtomicMeasure<C> measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw InputError("measure must be an object with an atoms array");
  std::vector<Atom<C>> atoms;
  for (const auto& e : j["atoms"]) {
    if (!e.is_object() || !e.contains("z") || !e.contains("mass") || !e["mass"].is_number())
      throw InputError("atom must have z and mass");
    Atom<C> a{from_cplx<C>(complex_from_json(e["z"])), real_of<C>(e["mass"].get<double>())};
    if constexpr (is_extended_v<C>) {
      if (e.contains("z_hp")) a.z = hp_complex_from_json(e["z_hp"]);
      if (e.contains("mass_hp")) a.mass = hp_from_string(e["mass_hp"]);
    }
    atoms.push_back(std::move(a));
  }
  return AtomicMeasure<C>(std::move(atoms));
}

template <class C>
json to_json(const MomentSequence<C>& s) {
  json out = {{"rho", s.rho()}, {"s", complex_list(s.values())}};
  if constexpr (is_extended_v<C>) {
    json hp = json::array();
    for (const auto& v : s.values()) hp.push_back(hp_to_json(v));
    out["s_hp"] = std::move(hp);
  }
  return out;
}

template <class C = hp_complex>
MomentSequence<C> moments_from_json(const json& j) {
  if (!j.is_object() || !j.contains("s") || !j["s"].is_array()) throw InputError("moments must be an object with s");
  std::vector<C> s;
  for (const auto& e : j["s"]) s.push_back(from_cplx<C>(complex_from_json(e)));
  if constexpr (is_extended_v<C>) {
    if (j.contains("s_hp")) {
      const auto& hp = j["s_hp"];
      if (!hp.is_array() || hp.size() != s.size()) throw InputError("s_hp must match s in length");
      for (std::size_t k = 0; k < s.size(); ++k) s[k] = hp_complex_from_json(hp[k]);
    }
  }
  if (j.contains("rho") && (!j["rho"].is_number_integer() || j["rho"].get<long long>() + 1 != static_cast<long long>(s.size())))
    throw InputError("rho must equal the number of moments minus one");
  return MomentSequence<C>(std::move(s));
}

inline json to_json(const CanonicalForm& f) {
  return {{"basis", rows_to_json(f.basis)}, {"matrix", to_json(f.matrix)}, {"phases", f.phases}};
}

inline CanonicalForm canonical_from_json(const json& j) {
  CanonicalForm f;
  f.basis = rows_from_json(j.at("basis"));
  const auto op = operator_from_json(j.at("matrix"));
  if (!op.tridiagonal) throw InputError("canonical matrix must be tridiagonal");
  f.matrix = *op.tridiagonal;
  f.phases = j.at("phases").get<std::vector<double>>();
  return f;
}

inline json to_json(const GramReport& r) {
  json values = json::array();
  for (const auto& e : r.values)
    values.push_back({{"n", e.n}, {"gamma", to_json(e.gamma)}, {"scale", e.scale}, {"relative", e.relative()}});
  return {{"values", std::move(values)}, {"tol", r.tol}, {"passes", r.passes}};
}

inline json to_json(const SimilarityReport& r) {
  return {{"residuals", r.residuals},
          {"max_atom_deviation", r.max_atom_deviation},
          {"max_residual", r.max_residual},
          {"tol", r.tol},
          {"passes", r.passes}};
}

template <class C>
json polynomial_rows(const PolynomialFamily<C>& p) {
  json rows = json::array();
  for (const auto& r : p.rows()) rows.push_back(complex_list(r));
  return rows;
}

template <class C>
json to_json(const SimilarityData<C>& s) {
  json circles = json::array();
  for (const auto& c : s.solution.circles)
    circles.push_back({{"order", c.order}, {"radius", to_double(c.radius)}, {"target", to_json(to_cplx(c.target))}});
  return {{"d", s.dim()},
          {"matrix", to_json(s.matrix)},
          {"moments", to_json(s.moments)},
          {"measure", to_json(s.measure)},
          {"circles", std::move(circles)},
          {"polynomials", polynomial_rows(s.polys)},
          {"rank_one_scale", to_json(to_cplx(s.rank_one_scale))},
          {"left_factor", complex_list(s.left_factor_coefficients())},
          {"right_factor_conjugated", complex_list(s.polys.coefficients(s.dim() - 1))}};
}

}  // namespace csim::io
