#include "dcpl/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dcpl/errors.hpp"
#include "dcpl/geometry.hpp"
#include "dcpl/solver.hpp"

namespace dcpl {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double nearest_branch(double raw, double reference) {
  return raw + kTwoPi * std::round((reference - raw) / kTwoPi);
}

struct Rescaled {
  const Subcomplex& sub;
  const ScaleField& u;
  double operator()(int a, int b) const {
    return std::abs(sub.vertices()[a].position - sub.vertices()[b].position) * std::exp(0.5 * (u[a] + u[b]));
  }
};

// Position of r given placed p, q where (p, q, r) is counterclockwise.
Complex place_third(Complex fp, Complex fq, double pq, double pr, double qr) {
  const double angle = corner_angle(qr, pq, pr);
  return fp + std::polar(pr, std::arg(fq - fp) + angle);
}

TriangleMap wirtinger(Complex z0, Complex z1, Complex z2, Complex f0, Complex f1, Complex f2) {
  const Complex d1 = z1 - z0, d2 = z2 - z0, g1 = f1 - f0, g2 = f2 - f0;
  const Complex den = std::conj(d1) * d2 - d1 * std::conj(d2);  // 2i * signed area
  if (std::abs(den) <= 1e-300) throw DegenerateTriangle("source triangle has zero area");
  return {(g2 * std::conj(d1) - g1 * std::conj(d2)) / den, -(g2 * d1 - g1 * d2) / den};
}

}  // namespace

PLMap layout(const Subcomplex& sub, const ScaleField& u, const Normalization& norm) {
  if (!feasibility(sub, u)) throw InfeasibleScaleField("layout: rescaled triangles violate triangle inequalities");
  const int origin = sub.origin_vertex();
  const int v0 = sub.seed_vertex();
  if (origin == kNone || v0 == kNone) throw Error("layout: subcomplex has no seed edge");

  const Rescaled lt{sub, u};
  const auto& tris = sub.triangles();
  PLMap out;
  out.image_positions.assign(sub.num_vertices(), Complex{0.0, 0.0});
  std::vector<char> placed(sub.num_vertices(), 0);
  out.image_positions[origin] = norm.image_of_origin;
  out.image_positions[v0] = norm.image_of_origin + std::polar(lt(origin, v0), norm.seed_direction);
  placed[origin] = placed[v0] = 1;

  std::vector<char> visited(tris.size(), 0);
  std::deque<int> queue;
  for (int t : sub.edge_triangles(sub.seed_edge())) {
    if (t != kNone) {
      visited[t] = 1;
      queue.push_back(t);
    }
  }
  try {
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      const auto& v = tris[t].v;
      for (int k = 0; k < 3; ++k) {
        const int p = v[k], q = v[(k + 1) % 3], r = v[(k + 2) % 3];
        if (placed[p] && placed[q] && !placed[r]) {
          out.image_positions[r] =
              place_third(out.image_positions[p], out.image_positions[q], lt(p, q), lt(p, r), lt(q, r));
          placed[r] = 1;
          break;
        }
      }
      for (int e : sub.triangle_edges(t)) {
        for (int nb : sub.edge_triangles(e)) {
          if (nb != kNone && !visited[nb]) {
            visited[nb] = 1;
            queue.push_back(nb);
          }
        }
      }
    }

    // Closure: re-derive every corner from the other two.
    for (const auto& tri : tris) {
      const auto& v = tri.v;
      for (int k = 0; k < 3; ++k) {
        const int p = v[k], q = v[(k + 1) % 3], r = v[(k + 2) % 3];
        const Complex derived =
            place_third(out.image_positions[p], out.image_positions[q], lt(p, q), lt(p, r), lt(q, r));
        out.holonomy_defect = std::max(out.holonomy_defect, std::abs(derived - out.image_positions[r]));
      }
    }
  } catch (const InfeasibleTriangle& e) {
    throw InfeasibleScaleField(std::string("layout: ") + e.what());
  }
  if (std::find(visited.begin(), visited.end(), 0) != visited.end()) {
    throw Error("layout: triangles not reachable from the seed edge");
  }

  out.triangle_maps.reserve(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& v = tris[t].v;
    const Complex f0 = out.image_positions[v[0]], f1 = out.image_positions[v[1]], f2 = out.image_positions[v[2]];
    if (!(cross(f1 - f0, f2 - f0) > 0.0)) {
      throw OrientationFlip("image triangle " + std::to_string(t) + " is not counterclockwise");
    }
    out.triangle_maps.push_back(triangle_derivatives(out, sub, static_cast<int>(t)));
  }

  // Edge rotations, unwrapped breadth-first from the seed edge.
  const auto& edges = sub.edges();
  auto raw_rotation = [&](int e) {
    const int a = edges[e][0], b = edges[e][1];
    return std::arg((out.image_positions[b] - out.image_positions[a]) /
                    (sub.vertices()[b].position - sub.vertices()[a].position));
  };
  out.edge_rotations.assign(edges.size(), 0.0);
  std::vector<char> done(edges.size(), 0);
  const int seed = sub.seed_edge();
  const double seed_source_dir = std::arg(sub.vertices()[v0].position - sub.vertices()[origin].position);
  out.edge_rotations[seed] = nearest_branch(raw_rotation(seed), norm.seed_direction - seed_source_dir);
  done[seed] = 1;
  std::deque<int> equeue{seed};
  while (!equeue.empty()) {
    const int e = equeue.front();
    equeue.pop_front();
    for (int t : sub.edge_triangles(e)) {
      if (t == kNone) continue;
      for (int f : sub.triangle_edges(t)) {
        if (done[f]) continue;
        out.edge_rotations[f] = nearest_branch(raw_rotation(f), out.edge_rotations[e]);
        done[f] = 1;
        equeue.push_back(f);
      }
    }
  }
  return out;
}

double edge_rotation(const PLMap& map, const Subcomplex& sub, int edge) {
  if (edge < 0 || static_cast<std::size_t>(edge) >= sub.num_edges()) throw Error("edge index out of range");
  return map.edge_rotations[edge];
}

TriangleMap triangle_derivatives(const PLMap& map, const Subcomplex& sub, int triangle) {
  const auto& v = sub.triangles()[triangle].v;
  const auto& P = sub.vertices();
  const auto& F = map.image_positions;
  return wirtinger(P[v[0]].position, P[v[1]].position, P[v[2]].position, F[v[0]], F[v[1]], F[v[2]]);
}

Complex evaluate(const PLMap& map, const Subcomplex& sub, Complex point) {
  const auto [s, t] = sub.spec().coordinates(point);
  const int m = static_cast<int>(std::floor(s)), n = static_cast<int>(std::floor(t));
  int best = kNone;
  std::array<double, 3> best_bary{};
  double best_min = -1e300;
  for (int dn = -1; dn <= 1; ++dn) {
    for (int dm = -1; dm <= 1; ++dm) {
      for (bool up : {true, false}) {
        auto tri = sub.find_triangle({m + dm, n + dn, up});
        if (!tri) continue;
        const auto& v = sub.triangles()[*tri].v;
        const Complex a = sub.vertices()[v[0]].position, b = sub.vertices()[v[1]].position,
                      c = sub.vertices()[v[2]].position;
        const double area = cross(b - a, c - a);
        const std::array<double, 3> bary{cross(b - point, c - point) / area, cross(c - point, a - point) / area,
                                         cross(a - point, b - point) / area};
        const double lo = std::min({bary[0], bary[1], bary[2]});
        if (lo > best_min) {
          best_min = lo;
          best = *tri;
          best_bary = bary;
        }
      }
    }
  }
  if (best == kNone || best_min < -1e-10) throw OutsideSupport("point lies outside the subcomplex support");
  const auto& v = sub.triangles()[best].v;
  return best_bary[0] * map.image_positions[v[0]] + best_bary[1] * map.image_positions[v[1]] +
         best_bary[2] * map.image_positions[v[2]];
}

double holonomy_diagnostic(const PLMap& map) { return map.holonomy_defect; }

}  // namespace dcpl
