#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tsfrac {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidTimeScale : Error {
    explicit InvalidTimeScale(const std::string& msg) : Error(msg) {}
};

struct PointNotOnGrid : Error {
    explicit PointNotOnGrid(double t)
        : Error("point " + std::to_string(t) + " is not on the grid"), t(t) {}
    double t;
};

struct HorizonExceeded : Error {
    explicit HorizonExceeded(const std::string& msg) : Error(msg) {}
};

struct InvalidCount : Error {
    explicit InvalidCount(const std::string& msg) : Error(msg) {}
};

struct HorizonTooSmall : Error {
    explicit HorizonTooSmall(const std::string& msg) : Error(msg) {}
};

struct NotRegressive : Error {
    NotRegressive(std::complex<double> z, long index)
        : Error("constant (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                ") is not regressive at grid index " + std::to_string(index)),
          z(z), index(index) {}
    std::complex<double> z;
    long index;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), pos(pos) {}
    std::size_t pos;
};

struct PoleEvaluation : Error {
    explicit PoleEvaluation(std::complex<double> z)
        : Error("evaluation at a pole: (" + std::to_string(z.real()) + "," +
                std::to_string(z.imag()) + ")"), z(z) {}
    std::complex<double> z;
};

struct BranchCut : Error {
    explicit BranchCut(std::complex<double> z)
        : Error("evaluation on the branch cut (negative real axis) with a non-integer "
                "exponent"), z(z) {}
    std::complex<double> z;
};

struct ArityMismatch : Error {
    explicit ArityMismatch(const std::string& msg) : Error(msg) {}
};

struct NonFiniteInitialValue : Error {
    explicit NonFiniteInitialValue(int k)
        : Error("initial value at derivative index " + std::to_string(k) +
                " has no finite transform limit"), k(k) {}
    int k;
};

struct TailUnbounded : Error {
    explicit TailUnbounded(const std::string& msg) : Error(msg) {}
};

struct NotRational : Error {
    explicit NotRational(const std::string& msg) : Error(msg) {}
};

struct NotStrictlyProper : Error {
    explicit NotStrictlyProper(const std::string& msg) : Error(msg) {}
};

struct NotInvertibleTerm : Error {
    explicit NotInvertibleTerm(const std::string& msg) : Error(msg) {}
};

struct IllConditioned : Error {
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};

struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg) : Error(msg) {}
};

struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg) : Error(msg) {}
};

struct ScenarioUnsupported : Error {
    explicit ScenarioUnsupported(const std::string& msg) : Error(msg) {}
};

struct TransformFitFailed : Error {
    explicit TransformFitFailed(const std::string& msg) : Error(msg) {}
};

}  // namespace tsfrac
