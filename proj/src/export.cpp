#include "dcpl/export.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "dcpl/errors.hpp"
#include "dcpl/study.hpp"

namespace dcpl {

std::string mesh_obj(const Subcomplex& sub, std::span<const Complex> positions) {
  std::string out;
  for (Complex p : positions) {
    out += "v " + format_number(p.real()) + " " + format_number(p.imag()) + " 0\n";
  }
  for (const auto& t : sub.triangles()) {
    out += "f " + std::to_string(t.v[0] + 1) + " " + std::to_string(t.v[1] + 1) + " " + std::to_string(t.v[2] + 1) +
           "\n";
  }
  return out;
}

std::string overlay_svg(const Subcomplex& sub, const PLMap& map, double epsilon, const std::string& map_name) {
  std::vector<Complex> source;
  for (const auto& v : sub.vertices()) source.push_back(v.position);
  const auto& image = map.image_positions;

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const std::vector<Complex>* pts : std::array<const std::vector<Complex>*, 2>{&source, &image}) {
    for (Complex p : *pts) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double size = 800.0, pad = 40.0, scale = (size - 2 * pad) / span;
  // SVG y axis points down.
  auto sx = [&](Complex p) { return format_number(pad + (p.real() - x0) * scale); };
  auto sy = [&](Complex p) { return format_number(size - pad - (p.imag() - y0) * scale); };
  const double stroke = std::max(0.2, std::min(1.0, 0.1 * epsilon * scale));

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"840\" viewBox=\"0 0 800 840\">\n";
  out += "<rect width=\"800\" height=\"840\" fill=\"white\"/>\n";
  auto draw = [&](const std::vector<Complex>& pts, const char* color) {
    out += std::string("<g fill=\"none\" stroke=\"") + color + "\" stroke-width=\"" + format_number(stroke) + "\">\n";
    for (const auto& e : sub.edges()) {
      out += "<line x1=\"" + sx(pts[e[0]]) + "\" y1=\"" + sy(pts[e[0]]) + "\" x2=\"" + sx(pts[e[1]]) + "\" y2=\"" +
             sy(pts[e[1]]) + "\"/>\n";
    }
    out += "</g>\n";
  };
  draw(source, "#1f77b4");
  draw(image, "#d62728");
  out += "<text x=\"20\" y=\"825\" font-family=\"sans-serif\" font-size=\"14\">";
  out += "<tspan fill=\"#1f77b4\">source</tspan> / <tspan fill=\"#d62728\">image</tspan>";
  out += " map=" + map_name + " epsilon=" + format_number(epsilon) + "</text>\n";
  out += "</svg>\n";
  return out;
}

std::string scalefield_json(const Subcomplex& sub, const ScaleField& u) {
  nlohmann::ordered_json j;
  j["epsilon"] = sub.spec().epsilon;
  nlohmann::ordered_json verts = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < sub.num_vertices(); ++v) {
    const auto& vx = sub.vertices()[v];
    verts.push_back({{"m", vx.m},
                     {"n", vx.n},
                     {"x", vx.position.real()},
                     {"y", vx.position.imag()},
                     {"u", u[static_cast<Eigen::Index>(v)]},
                     {"boundary", !sub.is_interior(static_cast<int>(v))}});
  }
  j["vertices"] = verts;
  return j.dump(1) + "\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace dcpl
