#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace objmap {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using RGB = Eigen::Vector3d;

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Point set has too little rank for the requested operation (collinear,
/// coincident, or simply too few points).
struct DegenerateCloudError : Error {
  explicit DegenerateCloudError(const std::string& what) : Error(what) {}
};

/// Training produced a non-finite loss or gradient.
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& what) : Error(what) {}
};

/// Isosurface extraction found no crossing of the iso level.
struct EmptySurfaceError : Error {
  explicit EmptySurfaceError(const std::string& what) : Error(what) {}
};

/// Malformed or out-of-range configuration / scene description.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// File could not be read, written, or parsed.
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace objmap
