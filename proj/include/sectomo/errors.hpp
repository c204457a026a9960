#pragma once

#include <stdexcept>
#include <string>

namespace sectomo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidBody : Error { using Error::Error; };
struct NotDifferentiable : Error { using Error::Error; };
struct PointInsideBody : Error { using Error::Error; };
struct PointOutsideBody : Error { using Error::Error; };
struct NotAdmissible : Error {
    std::string reason;
    explicit NotAdmissible(const std::string& r) : Error("not admissible: " + r), reason(r) {}
};
struct InnerNotContained : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct DirectionOutsideCone : Error { using Error::Error; };
struct NonConvexProfile : Error { using Error::Error; };
struct DataExhausted : Error { using Error::Error; };
struct NegativePower : Error { using Error::Error; };
struct DegenerateDirection : Error { using Error::Error; };
struct OrbitEscaped : Error { using Error::Error; };
struct NonDecreasingAngle : Error { using Error::Error; };
struct RatioNotContracting : Error { using Error::Error; };
struct InvalidPower : Error { using Error::Error; };
struct FrameInvalid : Error { using Error::Error; };
struct NotComparable : Error { using Error::Error; };
struct ChartOverflow : Error { using Error::Error; };
struct SeedOffBoundary : Error { using Error::Error; };
struct FrontierStalled : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };
struct IncompleteTable : Error { using Error::Error; };
struct Divergent : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace sectomo
