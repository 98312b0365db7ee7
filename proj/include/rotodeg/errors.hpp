#pragma once

#include <stdexcept>
#include <string>

#include "rotodeg/types.hpp"

namespace rotodeg {

// Base class for every failure the toolkit reports. `code()` is the stable
// identifier written into error JSON by the CLI.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string &what) : std::runtime_error(what), code_(std::move(code)) {}
    [[nodiscard]] const std::string &code() const noexcept { return code_; }

  private:
    std::string code_;
};

#define ROTODEG_DEFINE_ERROR(Name)                                                                                     \
    class Name : public Error {                                                                                        \
      public:                                                                                                          \
        explicit Name(const std::string &what) : Error(#Name, what) {}                                                \
    }

ROTODEG_DEFINE_ERROR(NormCapExceeded);
ROTODEG_DEFINE_ERROR(UnknownScenario);
ROTODEG_DEFINE_ERROR(InvalidParams);
ROTODEG_DEFINE_ERROR(InvalidConfig);
ROTODEG_DEFINE_ERROR(InvalidRegion);
ROTODEG_DEFINE_ERROR(BlowUp);
ROTODEG_DEFINE_ERROR(StepLimit);
ROTODEG_DEFINE_ERROR(IntegerGrazing);
ROTODEG_DEFINE_ERROR(NoConvergence);
ROTODEG_DEFINE_ERROR(IllConditioned);
ROTODEG_DEFINE_ERROR(Marginal);
ROTODEG_DEFINE_ERROR(Resonant);
ROTODEG_DEFINE_ERROR(Inconsistent);
ROTODEG_DEFINE_ERROR(NotFound);
ROTODEG_DEFINE_ERROR(NotHamiltonian);

#undef ROTODEG_DEFINE_ERROR

/// A trajectory started at `start_point` came within the origin clearance at
/// `hit_time`, so its angle cannot be lifted.
struct NullSetHit {
    Vec2 start_point = Vec2::Zero();
    double hit_time = 0.0;
};

class OriginCrossing : public Error {
  public:
    OriginCrossing(const NullSetHit &hit, const std::string &what) : Error("OriginCrossing", what), hit_(hit) {}
    [[nodiscard]] const NullSetHit &hit() const noexcept { return hit_; }

  private:
    NullSetHit hit_;
};

/// The map vanishes (or comes within tolerance of the target) at a boundary
/// sample; the degree is undefined there. `point` is the offending sample.
class BoundaryZero : public Error {
  public:
    BoundaryZero(const Vec2 &point, double clearance, const std::string &what)
        : Error("BoundaryZero", what), point_(point), clearance_(clearance) {}
    [[nodiscard]] const Vec2 &point() const noexcept { return point_; }
    [[nodiscard]] double clearance() const noexcept { return clearance_; }

  private:
    Vec2 point_;
    double clearance_;
};

/// Adaptive refinement gave up before every gap satisfied its predicate.
class RefinementLimit : public Error {
  public:
    explicit RefinementLimit(const std::string &what) : Error("RefinementLimit", what) {}
};

}  // namespace rotodeg
