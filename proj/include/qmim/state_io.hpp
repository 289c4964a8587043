#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "qmim/errors.hpp"
#include "qmim/states.hpp"

namespace qmim {

// State file format:
//   { "dims": [d1, ..., dn], "kind": "pure",  "vector": [[re, im], ...] }
//   { "dims": [d1, ..., dn], "kind": "mixed", "matrix": [[[re, im], ...], ...] }
// Matrices are row-major. Physical validity is not checked here.

namespace detail {

inline Complex parse_complex(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline SystemLayout parse_layout(const nlohmann::json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw ParseError("\"dims\" must be a non-empty array");
  }
  std::vector<std::size_t> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 2) {
      throw ParseError("\"dims\" entries must be integers >= 2");
    }
    dims.push_back(d.get<std::size_t>());
  }
  try {
    return SystemLayout(std::move(dims));
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

inline nlohmann::json complex_to_json(const Complex& z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace detail

/// Builds a DensityMatrix from an already-parsed JSON document.
inline DensityMatrix state_from_json(const nlohmann::json& j, const Tolerances& tol = {}) {
  if (!j.is_object()) throw ParseError("state document must be a JSON object");
  SystemLayout layout = detail::parse_layout(j);
  const auto side = static_cast<Eigen::Index>(layout.total_dimension());
  const std::string kind = j.value("kind", "");

  if (kind == "pure") {
    if (!j.contains("vector") || !j["vector"].is_array()) throw ParseError("pure state needs a \"vector\" array");
    const auto& vec = j["vector"];
    if (static_cast<Eigen::Index>(vec.size()) != side) {
      throw ParseError("vector length " + std::to_string(vec.size()) + " does not match dims product " +
                       std::to_string(side));
    }
    ComplexVector v(side);
    for (Eigen::Index i = 0; i < side; ++i) {
      v(i) = detail::parse_complex(vec[static_cast<std::size_t>(i)], "vector[" + std::to_string(i) + "]");
    }
    return density_from_pure(PureState(std::move(layout), std::move(v)), tol);
  }

  if (kind == "mixed") {
    if (!j.contains("matrix") || !j["matrix"].is_array()) throw ParseError("mixed state needs a \"matrix\" array");
    const auto& rows = j["matrix"];
    if (static_cast<Eigen::Index>(rows.size()) != side) {
      throw ParseError("matrix has " + std::to_string(rows.size()) + " rows, dims product is " +
                       std::to_string(side));
    }
    ComplexMatrix m(side, side);
    for (Eigen::Index r = 0; r < side; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != rows.size()) {
        throw ParseError("matrix is not square: row " + std::to_string(r) + " has " +
                         std::to_string(row.is_array() ? row.size() : 0) + " entries");
      }
      for (Eigen::Index c = 0; c < side; ++c) {
        m(r, c) = detail::parse_complex(row[static_cast<std::size_t>(c)],
                                        "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return DensityMatrix(std::move(layout), std::move(m));
  }

  throw ParseError("\"kind\" must be \"pure\" or \"mixed\"");
}

inline DensityMatrix parse_state(std::string_view text, const Tolerances& tol = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  return state_from_json(j, tol);
}

/// Reads a state file; "-" reads standard input.
inline DensityMatrix load_state(const std::string& path, const Tolerances& tol = {}) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open state file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_state(text, tol);
}

inline nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(detail::complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"dims", rho.layout().dims()}, {"kind", "mixed"}, {"matrix", std::move(rows)}};
}

inline nlohmann::json to_json(const PureState& psi) {
  nlohmann::json vec = nlohmann::json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) vec.push_back(detail::complex_to_json(psi.amplitudes()(i)));
  return {{"dims", psi.layout().dims()}, {"kind", "pure"}, {"vector", std::move(vec)}};
}

}  // namespace qmim
