#pragma once
// Error hierarchy for joycekit.  Every failure mode an operation can signal
// has a distinct type with a stable machine-readable code string, so the CLI
// can emit structured error records and callers can catch selectively.

#include <stdexcept>
#include <string>

namespace joycekit {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }
private:
    std::string code_;
};

#define JOYCEKIT_DEFINE_ERROR(NAME)                                          \
    class NAME : public Error {                                              \
    public:                                                                   \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}        \
    }

JOYCEKIT_DEFINE_ERROR(PoleError);              // evaluation at/near a pole of W
JOYCEKIT_DEFINE_ERROR(ZeroEpsilon);            // epsilon = 0 where a finite pencil member is required
JOYCEKIT_DEFINE_ERROR(BothZero);               // (eps0, eps1) = (0, 0) in the form pencil
JOYCEKIT_DEFINE_ERROR(StepUnderflow);          // finite-difference step too small for pole distance
JOYCEKIT_DEFINE_ERROR(NoPeriodStructure);      // operation needs an integral-linear chart
JOYCEKIT_DEFINE_ERROR(SingularMetric);         // numerically degenerate metric
JOYCEKIT_DEFINE_ERROR(UnsupportedModel);       // operation not defined for this model kind
JOYCEKIT_DEFINE_ERROR(DegenerateFrame);        // frame columns numerically dependent
JOYCEKIT_DEFINE_ERROR(DegenerateCurve);        // 4a^3 + 27b^2 = 0
JOYCEKIT_DEFINE_ERROR(DegenerateBase);         // discriminant vanishes under a base-dependent formula
JOYCEKIT_DEFINE_ERROR(QuadratureFailure);      // adaptive quadrature did not converge
JOYCEKIT_DEFINE_ERROR(OffCurve);               // p^2 != q^3 + a q + b beyond tolerance
JOYCEKIT_DEFINE_ERROR(PathThroughBranchPoint); // integration path hits a branch point
JOYCEKIT_DEFINE_ERROR(ZeroZ);                  // z = 0 in a chart needing log(z / 2 pi i)
JOYCEKIT_DEFINE_ERROR(PoleAtPZero);            // p = 0 in a flow that divides by p
JOYCEKIT_DEFINE_ERROR(PoleOnZeroSection);      // theta = 0 is a pole in this chart
JOYCEKIT_DEFINE_ERROR(PoleEncountered);        // path integration aborted at a pole guard
JOYCEKIT_DEFINE_ERROR(TolFailure);             // integrator could not meet the local tolerance
JOYCEKIT_DEFINE_ERROR(TransversalityFailure);  // lift of a base vector does not exist/unique
JOYCEKIT_DEFINE_ERROR(NotOnY);                 // seed violates the constraint locus
JOYCEKIT_DEFINE_ERROR(LoopThroughSingularity); // monodromy loop too close to a singular point
JOYCEKIT_DEFINE_ERROR(DomainExit);             // Hamiltonian flow left the declared domain
JOYCEKIT_DEFINE_ERROR(ConfigError);            // invalid CLI / suite configuration

#undef JOYCEKIT_DEFINE_ERROR

} // namespace joycekit
