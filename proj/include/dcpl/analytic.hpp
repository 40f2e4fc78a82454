#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dcpl/lattice.hpp"
#include "dcpl/layout.hpp"
#include "dcpl/types.hpp"

namespace dcpl {

// Derivatives of g = log f' up to fourth order (g1 = f''/f').
struct LogDerivatives {
  Complex g1, g2, g3, g4;
};

// A holomorphic map with nonvanishing derivative on its declared domain.
struct ConformalMap {
  std::string name;
  std::function<Complex(Complex)> f;
  std::function<Complex(Complex)> fprime;
  std::function<LogDerivatives(Complex)> g_derivs;
  std::function<bool(Complex)> domain_check;

  // Domain-checked evaluation; throw OutsideDomain.
  Complex eval_f(Complex z) const;
  Complex eval_fprime(Complex z) const;
  LogDerivatives eval_g_derivs(Complex z) const;
  double log_abs_fprime(Complex z) const;
  double arg_fprime(Complex z) const;
};

using MapParams = std::map<std::string, Complex>;

namespace maps {
ConformalMap identity();
ConformalMap affine(Complex c, Complex d);
ConformalMap exponential();
// z^2; the domain excludes |z| < 1e-3.
ConformalMap square();
// z + mu z^2
ConformalMap cubic_perturbation(Complex mu);
// (a z + b) / (c z + d)
ConformalMap moebius(Complex a, Complex b, Complex c, Complex d);
}  // namespace maps

std::vector<std::string> builtin_map_names();

// Looks up a builtin by name. Parameters: affine {c, d}; cubic_perturbation
// {mu}; moebius {a, b, c, d}. Missing parameters take the identity-like
// defaults. Throws UnknownMap.
ConformalMap make_map(const std::string& name, const MapParams& params = {});

// S(f) = g'' - g'^2 / 2.
Complex schwarzian(const ConformalMap& map, Complex z);

// Predicted coefficient of eps^4 in the angle-sum defect of log|f'| at v0:
//   -(sin a sin b sin c / 4) Re(S conj(g'')) - (1/4) Re(c(a,b,c) (g'^2 g'' / 2 - g'''' / 3)),
// c(a,b,c) = cos b sin^3 b + cos c sin^3 c e^{4ia} + cos a sin^3 a e^{4i(a+b)}.
// For the equilateral lattice this is -(3 sqrt 3 / 32) Re(S conj(g'')).
double predicted_constant(const ConformalMap& map, Complex v0, const LatticeSpec& spec);

// Angle sum minus 2 pi at v0 for u = log|f'| on the star of v0 at scale
// epsilon (the lattice scale of `spec` is ignored). Negative epsilon reflects
// the star. Throws InfeasibleTriangle, OutsideDomain.
double angle_sum_defect(const ConformalMap& map, Complex v0, const LatticeSpec& spec, double epsilon);

// f(origin) and arg(v0 - origin) + arg f'((origin + v0) / 2).
Normalization normalization_from_map(const ConformalMap& map, const Subcomplex& sub);

}  // namespace dcpl
