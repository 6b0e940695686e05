#pragma once

#include <stdexcept>
#include <string>

namespace ars {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// voxel_scene
struct PlacementFailure : Error { using Error::Error; };
struct DegenerateShape : Error { using Error::Error; };
struct UnknownObject : Error { using Error::Error; };
struct AlreadyRemoved : Error { using Error::Error; };
struct MalformedDocument : Error { using Error::Error; };

// sensing
struct OriginInsideOccupied : Error { using Error::Error; };
struct InvalidViewpoint : Error { using Error::Error; };
struct EmptyRoi : Error { using Error::Error; };

// language
struct NoDirectionFound : Error { using Error::Error; };
struct NoAnchorFound : Error { using Error::Error; };
struct AnchorNotVisible : Error { using Error::Error; };

// scorer
struct GridTooSmall : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct Divergence : Error { using Error::Error; };

// planner
struct EmptyViewpointSpace : Error { using Error::Error; };
struct NoElites : Error { using Error::Error; };

// blocking
struct DegenerateRay : Error { using Error::Error; };

}  // namespace ars
