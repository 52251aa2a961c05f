#pragma once

// Umbrella header.

#include "pentamesh/bisection.hpp"
#include "pentamesh/coloring.hpp"
#include "pentamesh/core.hpp"
#include "pentamesh/extrusion.hpp"
#include "pentamesh/fixtures.hpp"
#include "pentamesh/io.hpp"
#include "pentamesh/pent_mesh.hpp"
#include "pentamesh/slicing.hpp"
#include "pentamesh/tet_mesh.hpp"

namespace pentamesh {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pentamesh
