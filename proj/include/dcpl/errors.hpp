#pragma once

#include <stdexcept>
#include <string>

namespace dcpl {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DCPL_DEFINE_ERROR(Name)    \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  };

// lattice
DCPL_DEFINE_ERROR(InvalidLattice)
DCPL_DEFINE_ERROR(RegionTooSmall)
DCPL_DEFINE_ERROR(TopologyFailure)

// geometry
DCPL_DEFINE_ERROR(InfeasibleTriangle)
DCPL_DEFINE_ERROR(DegenerateEdge)

// solver
DCPL_DEFINE_ERROR(InfeasibleScaleField)
DCPL_DEFINE_ERROR(NotAcute)
DCPL_DEFINE_ERROR(LineSearchFailure)

// layout
DCPL_DEFINE_ERROR(OrientationFlip)
DCPL_DEFINE_ERROR(DegenerateTriangle)
DCPL_DEFINE_ERROR(OutsideSupport)

// analytic
DCPL_DEFINE_ERROR(UnknownMap)
DCPL_DEFINE_ERROR(OutsideDomain)

// studies
DCPL_DEFINE_ERROR(InsufficientData)
DCPL_DEFINE_ERROR(ConfigError)

#undef DCPL_DEFINE_ERROR

}  // namespace dcpl
