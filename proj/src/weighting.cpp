#include "lite_rvfl/weighting.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

namespace {

// Neumaier-compensated sum of i^k over [first, last].
double compensated_power_sum(std::uint64_t first, std::uint64_t last, int k) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::uint64_t i = first; i <= last; ++i) {
    const double term = std::pow(static_cast<double>(i), k);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

// Exact sum of i^k over [1, n] when n^(k+1) fits comfortably in 126 bits.
std::optional<unsigned __int128> exact_power_sum(std::uint64_t n, int k) {
  // sum_{i<=n} i^k <= n^(k+1); require that bound below 2^126.
  if (n == 0) return static_cast<unsigned __int128>(0);
  const double log2_bound = (k + 1) * std::log2(static_cast<double>(n));
  if (log2_bound >= 126.0) return std::nullopt;
  unsigned __int128 total = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    unsigned __int128 term = 1;
    for (int j = 0; j < k; ++j) term *= i;
    total += term;
  }
  return total;
}

double polynomial_share(std::uint64_t n, std::uint64_t window, int k) {
  const std::uint64_t head = n - window;
  if (auto all = exact_power_sum(n, k)) {
    const unsigned __int128 older = *exact_power_sum(head, k);
    const unsigned __int128 recent = *all - older;
    return static_cast<double>(static_cast<long double>(recent) /
                               static_cast<long double>(*all));
  }
  const double recent = compensated_power_sum(head + 1, n, k);
  const double older = compensated_power_sum(1, head, k);
  return recent / (recent + older);
}

}  // namespace

WeightScheme WeightScheme::uniform() { return WeightScheme(UniformWeights{}); }

WeightScheme WeightScheme::exponential(double theta) {
  if (!std::isfinite(theta) || theta < 1.0) {
    throw InvalidArgument("exponential weights need theta >= 1");
  }
  return WeightScheme(ExponentialWeights{theta});
}

WeightScheme WeightScheme::polynomial(int k) {
  if (k < 1) throw InvalidArgument("polynomial weights need k >= 1");
  return WeightScheme(PolynomialWeights{k});
}

double WeightScheme::theta() const {
  if (const auto* e = std::get_if<ExponentialWeights>(&law_)) return e->theta;
  throw InvalidArgument("theta requested from a non-exponential scheme");
}

int WeightScheme::k() const {
  if (const auto* p = std::get_if<PolynomialWeights>(&law_)) return p->k;
  throw InvalidArgument("k requested from a non-polynomial scheme");
}

double WeightScheme::weight_at(std::uint64_t i) const {
  if (i == 0) throw InvalidArgument("sample indices are 1-based");
  return std::visit(
      [i](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformWeights>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, ExponentialWeights>) {
          return std::pow(law.theta, static_cast<double>(i - 1));
        } else {
          return std::pow(static_cast<double>(i), law.k);
        }
      },
      law_);
}

double WeightScheme::log_squared_weight_at(std::uint64_t i) const {
  if (i == 0) throw InvalidArgument("sample indices are 1-based");
  return std::visit(
      [i](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformWeights>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ExponentialWeights>) {
          return 2.0 * static_cast<double>(i - 1) * std::log(law.theta);
        } else {
          return 2.0 * law.k * std::log(static_cast<double>(i));
        }
      },
      law_);
}

std::string WeightScheme::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      [&out](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformWeights>) {
          out << "uniform";
        } else if constexpr (std::is_same_v<T, ExponentialWeights>) {
          out << "exponential(" << law.theta << ")";
        } else {
          out << "polynomial(" << law.k << ")";
        }
      },
      law_);
  return out.str();
}

bool operator==(const WeightScheme& a, const WeightScheme& b) {
  if (a.law_.index() != b.law_.index()) return false;
  if (a.is_exponential()) return a.theta() == b.theta();
  if (a.is_polynomial()) return a.k() == b.k();
  return true;
}

ProportionReport proportion_recent(const WeightScheme& scheme, std::uint64_t n,
                                   std::uint64_t window) {
  if (window < 1 || window > n) {
    throw InvalidArgument("proportion_recent needs 1 <= L <= n");
  }
  ProportionReport report{n, window, 1.0, std::nullopt};
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformWeights>) {
          report.proportion = static_cast<double>(window) / static_cast<double>(n);
        } else if constexpr (std::is_same_v<T, ExponentialWeights>) {
          if (law.theta == 1.0) {
            report.proportion = static_cast<double>(window) / static_cast<double>(n);
            return;
          }
          // (1 - theta^-L) / (1 - theta^-n), written with expm1 so theta close
          // to 1 does not cancel.
          const double log_theta = std::log(law.theta);
          const double recent = -std::expm1(-static_cast<double>(window) * log_theta);
          const double all = -std::expm1(-static_cast<double>(n) * log_theta);
          report.proportion = recent / all;
          report.limit = recent;
        } else {
          report.proportion = polynomial_share(n, window, law.k);
          report.limit = 0.0;
        }
      },
      scheme.law());
  return report;
}

double limit_proportion(double theta, std::uint64_t window) {
  if (!(theta > 1.0) || !std::isfinite(theta)) {
    throw InvalidArgument("limit proportion needs theta > 1");
  }
  if (window < 1) throw InvalidArgument("window must be >= 1");
  return -std::expm1(-static_cast<double>(window) * std::log(theta));
}

double calibrate_theta(double alpha, std::uint64_t window) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1)");
  }
  if (window < 1) throw InvalidArgument("window must be >= 1");
  return std::exp(-std::log1p(-alpha) / static_cast<double>(window));
}

}  // namespace lite_rvfl
