#pragma once

#include <stdexcept>
#include <string>

namespace parmod {

/// Base class for every error raised by the library. All failure modes are
/// reported through typed exceptions; no public operation returns NaN or Inf.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PARMOD_ERROR(Name)                                              \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

// numeric / elementary maps
PARMOD_ERROR(DomainError);
PARMOD_ERROR(BranchCutHit);
PARMOD_ERROR(ZeroLog);
PARMOD_ERROR(PoleError);
PARMOD_ERROR(NoConvergence);

// preparation
PARMOD_ERROR(NotGeneric);
PARMOD_ERROR(NoRoot);
PARMOD_ERROR(SectorMismatch);
PARMOD_ERROR(TruncationTooCoarse);

// charts / flow
PARMOD_ERROR(OnSingularity);
PARMOD_ERROR(NewtonDiverged);

// Fatou / horn maps
PARMOD_ERROR(StripViolation);
PARMOD_ERROR(OrbitEscape);
PARMOD_ERROR(InsufficientOverlap);
PARMOD_ERROR(AliasingDetected);

// Glutsyuk / compatibility
PARMOD_ERROR(NotGlutsyukSector);
PARMOD_ERROR(RegimeError);
PARMOD_ERROR(SeriesStall);
PARMOD_ERROR(NonHyperbolic);
PARMOD_ERROR(NoOverlap);
PARMOD_ERROR(FitDiverged);
PARMOD_ERROR(ToleranceMiss);
PARMOD_ERROR(BelowNoiseFloor);

// Riccati
PARMOD_ERROR(DegenerateDenominator);
PARMOD_ERROR(IncompatibleDegrees);
PARMOD_ERROR(InvariantViolated);
PARMOD_ERROR(OrderUndetectable);
PARMOD_ERROR(GammaPole);
PARMOD_ERROR(IntegerResonance);
PARMOD_ERROR(PathSingularity);
PARMOD_ERROR(PivotVanished);
PARMOD_ERROR(InconsistentInput);

#undef PARMOD_ERROR

} // namespace parmod
