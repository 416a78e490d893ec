#pragma once

#include <stdexcept>
#include <string>

namespace mskel {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct EmptyMesh : Error { using Error::Error; };
struct NotWatertight : Error { using Error::Error; };
struct NoInnerPoints : Error { using Error::Error; };
struct DegenerateOccupancy : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct SubsetTooLarge : Error { using Error::Error; };
struct EmptySkeleton : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };
struct UnsupportedResolution : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

}  // namespace mskel
