#pragma once

#include <stdexcept>
#include <string>

namespace loopforge {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct NotUnitModulus : Error {
    using Error::Error;
};
struct TooFewSamples : Error {
    using Error::Error;
};
struct NonNormalInput : Error {
    using Error::Error;
};
struct EigenvalueOnCut : Error {
    using Error::Error;
};
struct ZeroEigenvalue : Error {
    using Error::Error;
};
struct EigenvalueOne : Error {
    using Error::Error;
};
struct EigenvalueMinusOne : Error {
    using Error::Error;
};
struct OddDimension : Error {
    using Error::Error;
};
struct NotInGroup : Error {
    using Error::Error;
};
struct NotInAlgebra : Error {
    using Error::Error;
};
struct DifferentFibres : Error {
    using Error::Error;
};
struct NonUnitVector : Error {
    using Error::Error;
};
struct EigenvalueOnWall : Error {
    using Error::Error;
};
struct ProjectionDegenerate : Error {
    using Error::Error;
};
struct WindowMismatch : Error {
    using Error::Error;
};
struct ModeOutsideWindow : Error {
    using Error::Error;
};
struct InvalidWeights : Error {
    using Error::Error;
};
struct ParticleCapExceeded : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct UnknownSuite : Error {
    using Error::Error;
};

}  // namespace loopforge
