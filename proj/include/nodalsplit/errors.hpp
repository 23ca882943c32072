#pragma once

#include <stdexcept>
#include <string>

namespace nodalsplit {

struct QuadratureError : std::runtime_error {
    double coarse, fine;
    QuadratureError(double coarse_, double fine_)
        : std::runtime_error("quadrature did not converge: coarse=" + std::to_string(coarse_) +
                             " fine=" + std::to_string(fine_)),
          coarse(coarse_), fine(fine_) {}
};

struct InadmissibleShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdmissibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateDirectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotAnEigenvalueError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularShiftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchIsolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GapUnresolvableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientCurvesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParametrizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nodalsplit
