#pragma once

#include "objmap/synth/frame.hpp"
#include "objmap/synth/scene.hpp"

namespace objmap::synth {

/// Analytic ray casting: per pixel the closest primitive intersection.
/// Depth maps store z-depth (distance along the optical axis). Shading is
/// Lambertian with a fixed light.
Frame render_frame(const Scene& scene, const RigidPose& camera, const Intrinsics& K,
                   int width, int height);

/// Renders the scene's orbit trajectory.
FrameSequence render_sequence(const Scene& scene);

/// Camera positions of the orbit trajectory (azimuth midpoint spacing).
std::vector<std::pair<double, RigidPose>> orbit_poses(const OrbitTrajectory& traj);

}  // namespace objmap::synth
