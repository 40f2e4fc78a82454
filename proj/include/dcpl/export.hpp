#pragma once

#include <span>
#include <string>

#include "dcpl/lattice.hpp"
#include "dcpl/layout.hpp"
#include "dcpl/types.hpp"

namespace dcpl {

// Wavefront OBJ with z = 0 vertices and 1-based triangle faces.
std::string mesh_obj(const Subcomplex& sub, std::span<const Complex> positions);

// Source mesh and image mesh overlaid in two stroke colors, with a legend.
std::string overlay_svg(const Subcomplex& sub, const PLMap& map, double epsilon, const std::string& map_name);

std::string scalefield_json(const Subcomplex& sub, const ScaleField& u);

// Throws Error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace dcpl
