#pragma once

#include <stdexcept>
#include <string>

namespace blockent {

// Base for everything the library throws. The CLI maps these to exit code 3.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define BLOCKENT_ERROR(Name)                                               \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    };

BLOCKENT_ERROR(NonRealA0)
BLOCKENT_ERROR(NonPositiveRange)
BLOCKENT_ERROR(DivergentPoint)
BLOCKENT_ERROR(DomainError)
BLOCKENT_ERROR(OnDiscontinuity)
BLOCKENT_ERROR(UnclassifiableConfiguration)
BLOCKENT_ERROR(BranchCut)
BLOCKENT_ERROR(NonCommutingLimits)
BLOCKENT_ERROR(QuadratureFailure)
BLOCKENT_ERROR(EigenFailure)
BLOCKENT_ERROR(SpectrumOutOfRange)
BLOCKENT_ERROR(InsufficientSamples)
BLOCKENT_ERROR(RegionMismatch)
BLOCKENT_ERROR(NonConvergent)
BLOCKENT_ERROR(DegenerateRoots)
BLOCKENT_ERROR(NotSmooth)
BLOCKENT_ERROR(DegenerateGroundState)
BLOCKENT_ERROR(InvalidArgument)
BLOCKENT_ERROR(InvariantViolation)

#undef BLOCKENT_ERROR

}  // namespace blockent
