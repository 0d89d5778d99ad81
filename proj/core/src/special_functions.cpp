#include "cvqrc/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvqrc {

double erf(double x) { return std::erf(x); }

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

namespace {

// Gauss-Legendre nodes/weights on [0,1] pairs, selected by |rho| as in Genz's
// bivariate normal quadrature (Drezner-Wesolowsky transformed integrand).
struct GlRule {
  const double* w;
  const double* x;
  int n;
};

constexpr double w6[] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr double x6[] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr double w12[] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                          0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr double x12[] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                          0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr double w20[] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                          0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                          0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                          0.1527533871307259};
constexpr double x20[] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                          0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                          0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                          0.07652652113349733};

GlRule rule_for(double abs_rho) {
  if (abs_rho < 0.3) return {w6, x6, 3};
  if (abs_rho < 0.75) return {w12, x12, 6};
  return {w20, x20, 10};
}

double phid(double z) { return std_normal_cdf(z); }

// Upper-orthant probability P(X > dh, Y > dk), Genz's BVND algorithm: direct
// quadrature over asin(r) for moderate correlation, and the singularity-
// extracted form near |r| = 1.
double bvnu(double dh, double dk, double r) {
  constexpr double tp = 2.0 * std::numbers::pi;
  if (r == 0.0) return phid(-dh) * phid(-dk);

  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;
  const GlRule gl = rule_for(std::abs(r));

  if (std::abs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = 0.5 * std::asin(r);
    for (int i = 0; i < gl.n; ++i) {
      for (int is = -1; is <= 1; is += 2) {
        const double sn = std::sin(asr * (1.0 + is * gl.x[i]));
        bvn += gl.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / tp + phid(-h) * phid(-k);
  }

  // |r| >= 0.925: integrate the difference against the comonotone limit.
  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    }
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(tp) * phid(-b / a);
      bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    for (int i = 0; i < gl.n; ++i) {
      for (int is = -1; is <= 1; is += 2) {
        const double xs_ = a * (1.0 + is * gl.x[i]);
        const double xs = xs_ * xs_;
        const double rs = std::sqrt(1.0 - xs);
        asr = -0.5 * (bs / xs + hk);
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + d * xs);
          const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          bvn += a * gl.w[i] * std::exp(asr) * (ep - sp);
        }
      }
    }
    bvn = -bvn / tp;
  }
  if (r > 0.0) return bvn + phid(-std::max(h, k));
  return -bvn + std::max(0.0, phid(-h) - phid(-k));
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
  constexpr double slack = 1e-12;
  if (!(std::abs(rho) <= 1.0 + slack))
    throw std::invalid_argument("bivariate_normal_cdf: |rho| > 1");
  rho = std::clamp(rho, -1.0, 1.0);
  if (rho == 1.0) return std::min(std_normal_cdf(h), std_normal_cdf(k));
  if (rho == -1.0) return std::max(0.0, std_normal_cdf(h) + std_normal_cdf(k) - 1.0);
  const double p = bvnu(-h, -k, rho);
  return std::clamp(p, 0.0, 1.0);
}

double normalized_legendre(int d, double s) {
  if (d < 0 || d > max_legendre_degree)
    throw std::invalid_argument("normalized_legendre: degree out of range");
  if (d == 0) return 1.0;
  double pm1 = 1.0;
  double p = s;
  for (int n = 1; n < d; ++n) {
    const double pn1 = ((2.0 * n + 1.0) * s * p - n * pm1) / (n + 1.0);
    pm1 = p;
    p = pn1;
  }
  return std::sqrt(2.0 * d + 1.0) * p;
}

}  // namespace cvqrc
