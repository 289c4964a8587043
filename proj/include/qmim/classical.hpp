#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmim/errors.hpp"
#include "qmim/infotheory.hpp"
#include "qmim/mim.hpp"

namespace qmim {

inline constexpr std::size_t kMaxAlphabet = 8;
inline constexpr std::size_t kMaxVariables = 4;

/// Joint distribution of discrete random variables, probabilities stored
/// row-major over outcomes (last variable fastest).
class JointDistribution {
 public:
  JointDistribution(std::vector<std::size_t> dims, std::vector<double> probs)
      : dims_(std::move(dims)), probs_(std::move(probs)) {
    if (dims_.empty() || dims_.size() > kMaxVariables) {
      throw ArgumentError("joint distribution needs 1.." + std::to_string(kMaxVariables) + " variables");
    }
    std::size_t total = 1;
    for (std::size_t d : dims_) {
      if (d < 1 || d > kMaxAlphabet) {
        throw ArgumentError("alphabet size must lie in [1, " + std::to_string(kMaxAlphabet) + "]");
      }
      total *= d;
    }
    if (probs_.size() != total) {
      throw ArgumentError("expected " + std::to_string(total) + " probabilities, got " +
                          std::to_string(probs_.size()));
    }
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw ArgumentError("probabilities must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ArgumentError("probabilities sum to " + std::to_string(sum));
  }

  std::size_t variables() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> probs_;
};

/// Sums out every variable not in `keep` (0-based, any order, no duplicates).
/// Kept variables stay in their original order.
inline JointDistribution marginalize(const JointDistribution& d, std::span<const std::size_t> keep) {
  const std::size_t n = d.variables();
  if (keep.empty()) throw ArgumentError("marginalize needs a non-empty keep set");
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw ArgumentError("variable index " + std::to_string(k) + " out of range");
    if (kept[k]) throw ArgumentError("duplicate variable index " + std::to_string(k));
    kept[k] = true;
  }

  std::vector<std::size_t> out_dims;
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i]) out_dims.push_back(d.dims()[i]);
  }
  std::size_t out_total = 1;
  for (std::size_t x : out_dims) out_total *= x;
  std::vector<double> out(out_total, 0.0);

  std::vector<std::size_t> digits(n, 0);
  for (double p : d.probs()) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (kept[i]) idx = idx * d.dims()[i] + digits[i];
    }
    out[idx] += p;
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < d.dims()[i]) break;
      digits[i] = 0;
    }
  }
  // Renormalize away the rounding drift of the partial sums.
  double sum = 0.0;
  for (double p : out) sum += p;
  for (double& p : out) p /= sum;
  return JointDistribution(std::move(out_dims), std::move(out));
}

inline JointDistribution marginalize(const JointDistribution& d, std::initializer_list<std::size_t> keep) {
  return marginalize(d, std::span<const std::size_t>(keep.begin(), keep.size()));
}

inline Bits joint_entropy(const JointDistribution& d) { return detail::entropy_terms(d.probs()); }

/// I(X:Y) = H(X) + H(Y) - H(XY), clipped at 0 against rounding.
inline Bits classical_mutual_information(const JointDistribution& d) {
  if (d.variables() != 2) {
    throw ArgumentError("classical mutual information needs exactly 2 variables, got " +
                        std::to_string(d.variables()));
  }
  const double value =
      joint_entropy(marginalize(d, {0})) + joint_entropy(marginalize(d, {1})) - joint_entropy(d);
  return std::max(0.0, value);
}

/// H(X_i) on the diagonal, I(X_i:X_j) off it.
inline MutualInfoMatrix classical_mim(const JointDistribution& d) {
  const std::size_t n = d.variables();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    m(ii, ii) = joint_entropy(marginalize(d, {i}));
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      m(ii, jj) = classical_mutual_information(marginalize(d, {i, j}));
      m(jj, ii) = m(ii, jj);
    }
  }
  return MutualInfoMatrix(std::move(m));
}

/// Uniform draw from the probability simplex (normalized Exp(1) variates).
inline JointDistribution random_joint_distribution(std::vector<std::size_t> dims, std::uint64_t seed) {
  std::size_t total = 1;
  for (std::size_t x : dims) total *= x;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(total);
  double sum = 0.0;
  for (double& x : p) {
    x = expo(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return JointDistribution(std::move(dims), std::move(p));
}

// { "dims": [...], "probs": [...] }
inline JointDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("probs") || !j["dims"].is_array() ||
      !j["probs"].is_array()) {
    throw ParseError("distribution needs \"dims\" and \"probs\" arrays");
  }
  std::vector<std::size_t> dims;
  for (const auto& x : j["dims"]) {
    if (!x.is_number_integer() || x.get<long long>() < 1) throw ParseError("\"dims\" entries must be positive integers");
    dims.push_back(x.get<std::size_t>());
  }
  std::vector<double> probs;
  for (const auto& x : j["probs"]) {
    if (!x.is_number()) throw ParseError("\"probs\" entries must be numbers");
    probs.push_back(x.get<double>());
  }
  try {
    return JointDistribution(std::move(dims), std::move(probs));
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

inline JointDistribution load_distribution(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open distribution file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return distribution_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

inline nlohmann::json to_json(const JointDistribution& d) { return {{"dims", d.dims()}, {"probs", d.probs()}}; }

}  // namespace qmim
