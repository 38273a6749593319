#pragma once

// Field snapshot persistence. Layout: 8-byte magic "EULDISK1", nr and
// ntheta as 64-bit little-endian unsigned, time as a 64-bit float, then
// nr*ntheta 64-bit floats row-major with the radial index outer. Files
// written here append a self-describing grid trailer ("DFGRID01" + grading
// and angular-map parameters) so snapshots reload without a config; plain
// files without the trailer need a grid hint.

#include "diskflow/field.hpp"

#include <optional>
#include <string>

namespace diskflow {

void save_snapshot(const VorticityField& f, const std::string& path);

VorticityField load_snapshot(const std::string& path,
                             std::optional<GridSpec> hint = std::nullopt);

// CSV export with header r,theta,x1,x2,value; one row per node.
void export_csv(const VorticityField& f, const std::string& path);

// Full-precision double formatting shared by every text artifact.
std::string format_double(double v);

} // namespace diskflow
