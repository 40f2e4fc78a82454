#include "dcpl/analytic.hpp"

#include <cmath>

#include "dcpl/errors.hpp"
#include "dcpl/geometry.hpp"

namespace dcpl {

namespace {

const Complex kI{0.0, 1.0};

bool everywhere(Complex) { return true; }

Complex param(const MapParams& p, const std::string& key, Complex fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

Complex ConformalMap::eval_f(Complex z) const {
  if (!domain_check(z)) throw OutsideDomain(name + ": point outside the domain");
  return f(z);
}

Complex ConformalMap::eval_fprime(Complex z) const {
  if (!domain_check(z)) throw OutsideDomain(name + ": point outside the domain");
  return fprime(z);
}

LogDerivatives ConformalMap::eval_g_derivs(Complex z) const {
  if (!domain_check(z)) throw OutsideDomain(name + ": point outside the domain");
  return g_derivs(z);
}

double ConformalMap::log_abs_fprime(Complex z) const { return std::log(std::abs(eval_fprime(z))); }

double ConformalMap::arg_fprime(Complex z) const { return std::arg(eval_fprime(z)); }

namespace maps {

ConformalMap identity() {
  return {"identity", [](Complex z) { return z; }, [](Complex) { return Complex{1.0, 0.0}; },
          [](Complex) { return LogDerivatives{}; }, everywhere};
}

ConformalMap affine(Complex c, Complex d) {
  if (c == Complex{0.0, 0.0}) throw Error("affine map needs c != 0");
  return {"affine", [c, d](Complex z) { return c * z + d; }, [c](Complex) { return c; },
          [](Complex) { return LogDerivatives{}; }, everywhere};
}

ConformalMap exponential() {
  return {"exp", [](Complex z) { return std::exp(z); }, [](Complex z) { return std::exp(z); },
          [](Complex) { return LogDerivatives{{1.0, 0.0}, {}, {}, {}}; }, everywhere};
}

ConformalMap square() {
  return {"square", [](Complex z) { return z * z; }, [](Complex z) { return 2.0 * z; },
          [](Complex z) {
            const Complex w = 1.0 / z;
            return LogDerivatives{w, -w * w, 2.0 * w * w * w, -6.0 * w * w * w * w};
          },
          [](Complex z) { return std::abs(z) >= 1e-3; }};
}

ConformalMap cubic_perturbation(Complex mu) {
  const Complex k = 2.0 * mu;
  return {"cubic_perturbation", [mu](Complex z) { return z + mu * z * z; },
          [k](Complex z) { return 1.0 + k * z; },
          [k](Complex z) {
            const Complex w = k / (1.0 + k * z);
            return LogDerivatives{w, -w * w, 2.0 * w * w * w, -6.0 * w * w * w * w};
          },
          [k](Complex z) { return std::abs(1.0 + k * z) >= 1e-3; }};
}

ConformalMap moebius(Complex a, Complex b, Complex c, Complex d) {
  const Complex det = a * d - b * c;
  if (det == Complex{0.0, 0.0}) throw Error("moebius map needs ad - bc != 0");
  return {"moebius", [=](Complex z) { return (a * z + b) / (c * z + d); },
          [=](Complex z) {
            const Complex q = c * z + d;
            return det / (q * q);
          },
          [=](Complex z) {
            // g = log det - 2 log(cz + d)
            const Complex w = c / (c * z + d);
            return LogDerivatives{-2.0 * w, 2.0 * w * w, -4.0 * w * w * w, 12.0 * w * w * w * w};
          },
          [=](Complex z) { return std::abs(c * z + d) >= 1e-3; }};
}

}  // namespace maps

std::vector<std::string> builtin_map_names() {
  return {"identity", "affine", "exp", "square", "cubic_perturbation", "moebius"};
}

ConformalMap make_map(const std::string& name, const MapParams& params) {
  if (name == "identity") return maps::identity();
  if (name == "affine") return maps::affine(param(params, "c", 1.0), param(params, "d", 0.0));
  if (name == "exp") return maps::exponential();
  if (name == "square") return maps::square();
  if (name == "cubic_perturbation") return maps::cubic_perturbation(param(params, "mu", 0.1));
  if (name == "moebius") {
    return maps::moebius(param(params, "a", 1.0), param(params, "b", 0.0), param(params, "c", 0.0),
                         param(params, "d", 1.0));
  }
  throw UnknownMap("unknown map '" + name + "'");
}

Complex schwarzian(const ConformalMap& map, Complex z) {
  const auto g = map.eval_g_derivs(z);
  return g.g2 - 0.5 * g.g1 * g.g1;
}

double predicted_constant(const ConformalMap& map, Complex v0, const LatticeSpec& spec) {
  const auto g = map.eval_g_derivs(v0);
  const Complex s = g.g2 - 0.5 * g.g1 * g.g1;
  const double a = spec.alpha, b = spec.beta, c = spec.gamma;
  auto cs3 = [](double x) { return std::cos(x) * std::pow(std::sin(x), 3); };
  const Complex lattice_c = cs3(b) + cs3(c) * std::exp(4.0 * kI * a) + cs3(a) * std::exp(4.0 * kI * (a + b));
  const double isotropic = (s * std::conj(g.g2)).real();
  const double anisotropic = (lattice_c * (0.5 * g.g1 * g.g1 * g.g2 - g.g4 / 3.0)).real();
  return -(std::sin(a) * std::sin(b) * std::sin(c) / 4.0) * isotropic - anisotropic / 4.0;
}

double angle_sum_defect(const ConformalMap& map, Complex v0, const LatticeSpec& spec, double epsilon) {
  const LatticeSpec unit = spec.with_epsilon(1.0);
  const std::array<Complex, 3> dirs{unit.t1(), unit.t2(), unit.t2() - unit.t1()};
  std::array<Complex, 6> nbrs;
  std::array<double, 6> un;
  for (int k = 0; k < 6; ++k) {
    const Complex d = k < 3 ? dirs[k] : -dirs[k - 3];
    nbrs[k] = v0 + epsilon * d;
    un[k] = map.log_abs_fprime(nbrs[k]);
  }
  return star_angle_sum(v0, nbrs, map.log_abs_fprime(v0), un) - kTwoPi;
}

Normalization normalization_from_map(const ConformalMap& map, const Subcomplex& sub) {
  const int o = sub.origin_vertex(), v0 = sub.seed_vertex();
  if (o == kNone || v0 == kNone) throw Error("subcomplex has no seed edge");
  const Complex p0 = sub.vertices()[o].position, p1 = sub.vertices()[v0].position;
  return {map.eval_f(p0), std::arg(p1 - p0) + map.arg_fprime(0.5 * (p0 + p1))};
}

}  // namespace dcpl
