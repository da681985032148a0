#pragma once

#include "tal/kernel.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace tal {

enum class InitKind { zero, constant, shear, taylor_green, random };

/// Nodal velocity initializer, e.g. "constant:1,0,0", "shear:2", "random:7".
struct InitSpec {
    InitKind kind = InitKind::zero;
    Vec3 constant{0.0, 0.0, 0.0};
    double gamma = 1.0;
    std::uint64_t seed = 0;

    std::string to_string() const;
};

/// Parses NAME[:ARGS]. ARGS are separated by ',' or ':'. For "random" the
/// seed argument is optional and falls back to default_seed.
InitSpec parse_init(std::string_view text, std::uint64_t default_seed = 0);

/// zero:          u = 0
/// constant:      u = (vx, vy, vz)
/// shear:         u = (gamma * y, 0, 0)
/// taylor-green:  u = (sin X cos Y cos Z, -cos X sin Y cos Z, 0) with X, Y, Z
///                the coordinates mapped from the mesh bounding box to [0, 2 pi]
/// random:        components uniform in [-1, 1) from a seeded mt19937_64
NodalVelocity make_velocity(const Mesh& mesh, const InitSpec& spec);

} // namespace tal
