#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace lite_rvfl {

struct UniformWeights {};

// Sample i (1-based) carries weight theta^(i-1).
struct ExponentialWeights {
  double theta = 1.0;
};

// Sample i carries weight i^k.
struct PolynomialWeights {
  int k = 1;
};

class WeightScheme {
 public:
  using Law = std::variant<UniformWeights, ExponentialWeights, PolynomialWeights>;

  WeightScheme() = default;

  static WeightScheme uniform();
  static WeightScheme exponential(double theta);
  static WeightScheme polynomial(int k);

  const Law& law() const { return law_; }
  bool is_uniform() const { return std::holds_alternative<UniformWeights>(law_); }
  bool is_exponential() const { return std::holds_alternative<ExponentialWeights>(law_); }
  bool is_polynomial() const { return std::holds_alternative<PolynomialWeights>(law_); }

  // Only meaningful for the matching law; throws InvalidArgument otherwise.
  double theta() const;
  int k() const;

  // Weight of the i-th sample of the stream (1-based).
  double weight_at(std::uint64_t i) const;

  // Natural log of the squared weight of sample i, i.e. the coefficient that
  // multiplies a_i a_i^T in the normal equations. Finite for every i >= 1.
  double log_squared_weight_at(std::uint64_t i) const;

  std::string describe() const;

  friend bool operator==(const WeightScheme& a, const WeightScheme& b);

 private:
  explicit WeightScheme(Law law) : law_(law) {}
  Law law_ = UniformWeights{};
};

// Share of total weight carried by the newest L of n samples.
struct ProportionReport {
  std::uint64_t n = 0;
  std::uint64_t window = 0;
  double proportion = 0.0;
  // Large-n limit: 1 - theta^-L for exponential, 0 for polynomial, none for
  // uniform (the share L/n has no fixed limit for a fixed window).
  std::optional<double> limit;
};

ProportionReport proportion_recent(const WeightScheme& scheme, std::uint64_t n,
                                   std::uint64_t window);

// 1 - theta^-L. Requires theta > 1.
double limit_proportion(double theta, std::uint64_t window);

// theta = (1 - alpha)^(-1/L): the factor for which the newest L samples hold
// an asymptotic share alpha of the total weight.
double calibrate_theta(double alpha, std::uint64_t window);

}  // namespace lite_rvfl
