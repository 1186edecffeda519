#include "covbal/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "covbal/error.hpp"

namespace covbal {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre rules on [-1, 1], half of each symmetric rule (nodes < 0).
struct HalfRule {
  std::size_t size;
  std::array<double, 10> weight;
  std::array<double, 10> node;
};

constexpr HalfRule kRule6{3,
                          {0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
                          {-0.9324695142031522, -0.6612093864662647, -0.2386191860831970}};

constexpr HalfRule kRule12{6,
                           {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                            0.2031674267230659, 0.2334925365383547, 0.2491470458134029},
                           {-0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
                            -0.5873179542866171, -0.3678314989981802, -0.1252334085114692}};

constexpr HalfRule kRule20{10,
                           {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                            0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                            0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                            0.1527533871307259},
                           {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
                            -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
                            -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
                            -0.07652652113349733}};

double upper_orthant(double h, double k, double r) {
  const double ar = std::abs(r);
  const HalfRule& rule = ar < 0.3 ? kRule6 : (ar < 0.75 ? kRule12 : kRule20);
  double hk = h * k;
  double bvn = 0.0;

  if (ar < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r);
    for (std::size_t i = 0; i < rule.size; ++i) {
      for (double x : {rule.node[i], -rule.node[i]}) {
        const double sn = std::sin(asr * (x + 1.0) / 2.0);
        bvn += rule.weight[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / (2.0 * kTwoPi) + normal_sf(h) * normal_sf(k);
  }

  if (r < 0) {
    k = -k;
    hk = -hk;
  }
  if (ar < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * normal_sf(b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < rule.size; ++i) {
      const double x = rule.node[i];
      double xs = (a * (x + 1.0)) * (a * (x + 1.0));
      double rs = std::sqrt(1.0 - xs);
      bvn += a * rule.weight[i] *
             (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
              std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
      xs = as * (1.0 - x) * (1.0 - x) / 4.0;
      rs = std::sqrt(1.0 - xs);
      bvn += a * rule.weight[i] * std::exp(-(bs / xs + hk) / 2.0) *
             (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
              (1.0 + c * xs * (1.0 + d * xs)));
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0) return bvn + normal_sf(std::max(h, k));
  bvn = -bvn;
  if (k > h) bvn += h < 0 ? normal_cdf(k) - normal_cdf(h) : normal_sf(h) - normal_sf(k);
  return bvn;
}

}  // namespace

double clamp_probability(double p) {
  constexpr double kSlack = 1e-9;
  if (!(p >= -kSlack && p <= 1.0 + kSlack)) {
    throw NumericError("probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

double bvn_upper(double h, double k, double rho) {
  if (std::isnan(h) || std::isnan(k) || std::isnan(rho)) {
    throw std::invalid_argument("bvn_upper: NaN argument");
  }
  if (std::abs(rho) > 1.0) throw std::invalid_argument("bvn_upper: |rho| > 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (h == inf || k == inf) return 0.0;
  if (h == -inf) return k == -inf ? 1.0 : normal_sf(k);
  if (k == -inf) return normal_sf(h);
  if (rho == 0.0) return normal_sf(h) * normal_sf(k);
  return clamp_probability(upper_orthant(h, k, rho));
}

double bvn_upper(double z, double rho) { return bvn_upper(z, z, rho); }

double bvn_lower(double z, double rho) { return bvn_upper(-z, -z, rho); }

}  // namespace covbal
