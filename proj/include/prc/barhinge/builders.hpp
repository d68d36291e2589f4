#pragma once

// Geometry constructors for common substrates.

#include <array>
#include <vector>

#include "prc/schema/geometry.hpp"

namespace prc {

struct SheetMaterial {
  double mass = 0.01;
  double bar_stiffness = 222.15;
  double bar_damping = kInheritDamping;
  double hinge_stiffness = 0.01;
  bool rigid_bars = false;
};

/// Bars on every unique triangle edge and a hinge on every edge shared by
/// exactly two triangles. Rest lengths and rest angles are taken from the
/// given positions, so the sheet starts in equilibrium.
Geometry from_triangles(const NodeMatrixd& positions, const std::vector<std::array<Index, 3>>& triangles,
                        const SheetMaterial& material);

/// Corrugated Miura-type sheet with cells_x × cells_y quads, each split into
/// two triangles. Alternate node columns are raised by `height`; alternate rows
/// are offset by `shear` along x.
Geometry miura_sheet(int cells_x, int cells_y, double a = 1.0, double b = 1.0, double height = 0.3,
                     double shear = 0.25, const SheetMaterial& material = {});

}  // namespace prc
