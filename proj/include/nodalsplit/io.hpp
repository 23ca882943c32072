#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nodalsplit/boundary.hpp"
#include "nodalsplit/field.hpp"
#include "nodalsplit/nodal.hpp"

namespace nodalsplit {

// fixed 12-significant-digit formatting; keeps CSV output byte-stable
std::string fmt12(double v);

// Nodal-set plot in physical coordinates: domain outline (the left side is
// the curve x = -eta phi(y)), nodal polylines, optional hyperbola overlay.
void write_nodal_svg(const std::string& path, const DomainSpec& spec, const BoundaryFn& phi,
                     const std::vector<NodalCurve>& curves,
                     const std::optional<HyperbolaFit>& hyperbola, const std::string& title);

// row-major 64-bit floats preceded by a 32-byte header:
// magic "NSPL", u32 version, u32 nx, u32 ny, u32 k, u32 pad, f64 eta
void write_field_dump(const std::string& path, const Field2D& field, int k, double eta);
Field2D read_field_dump(const std::string& path, int* k_out = nullptr, double* eta_out = nullptr);

} // namespace nodalsplit
