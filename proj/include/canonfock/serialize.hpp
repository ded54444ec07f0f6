#pragma once
// JSON encodings for the dense types: complex scalars as [re, im] pairs
// (plain numbers accepted on input), vectors as arrays, matrices as arrays
// of rows. Malformed input surfaces as InvalidInput with kind ParseError.

#include <json.hpp>

#include <string>
#include <utility>

#include "canonfock/errors.hpp"
#include "canonfock/fockrep.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/symplectic.hpp"

namespace canonfock::serialize {

using linops::Complex;
using linops::ComplexMatrix;
using linops::ComplexVector;
using linops::RealVector;
using nlohmann::json;

inline json to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw InvalidInput("ParseError", where + ": expected number or [re, im]");
}

inline json to_json(const ComplexVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline ComplexVector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput("ParseError", where + ": expected array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = complex_from_json(j[static_cast<size_t>(i)], where);
  return v;
}

inline RealVector real_vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput("ParseError", where + ": expected array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const json& e = j[static_cast<size_t>(i)];
    if (!e.is_number()) throw InvalidInput("ParseError", where + ": expected real number");
    v(i) = e.get<double>();
  }
  return v;
}

inline json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("ParseError", where + ": expected nonempty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw InvalidInput("ParseError", where + ": expected array rows");
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidInput("ParseError", where + ": ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(row[static_cast<size_t>(c)], where);
  }
  return m;
}

// ---------------- domain types ----------------

inline json to_json(const symplectic::SymplecticPair& g) {
  return json{{"u", to_json(g.u)}, {"v", to_json(g.v)}};
}

inline symplectic::SymplecticPair pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("u") || !j.contains("v"))
    throw InvalidInput("ParseError", "pair_from_json: expected object with u, v");
  return symplectic::SymplecticPair(matrix_from_json(j["u"], "pair.u"),
                                    matrix_from_json(j["v"], "pair.v"));
}

inline json to_json(const symplectic::RotationGenerator& g) {
  return json{{"psi", to_json(g.psi)}};
}

inline symplectic::RotationGenerator rotation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("psi"))
    throw InvalidInput("ParseError", "rotation_from_json: expected object with psi");
  return symplectic::RotationGenerator(matrix_from_json(j["psi"], "rotation.psi"));
}

inline json to_json(const symplectic::SqueezeGenerator& g) {
  return json{{"xi", to_json(g.xi)}};
}

inline symplectic::SqueezeGenerator squeeze_from_json(const json& j) {
  if (!j.is_object() || !j.contains("xi"))
    throw InvalidInput("ParseError", "squeeze_from_json: expected object with xi");
  return symplectic::SqueezeGenerator(matrix_from_json(j["xi"], "squeeze.xi"));
}

inline json to_json(const fockrep::UltracoherentVector& u) {
  return json{{"log_amp", to_json(u.log_amp)}, {"z", to_json(u.z)}, {"f", to_json(u.f)}};
}

inline fockrep::UltracoherentVector state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("log_amp") || !j.contains("z") || !j.contains("f"))
    throw InvalidInput("ParseError", "state_from_json: expected object with log_amp, z, f");
  return fockrep::UltracoherentVector(complex_from_json(j["log_amp"], "state.log_amp"),
                                      matrix_from_json(j["z"], "state.z"),
                                      vector_from_json(j["f"], "state.f"));
}

}  // namespace canonfock::serialize
