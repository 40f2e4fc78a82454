#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dcpl/types.hpp"

namespace dcpl {

// Triangular lattice of congruent triangles with angles (alpha, beta, gamma),
// scaled so that the edge opposite each angle has length epsilon * sin(angle).
//
// Vertex (m, n) sits at origin_offset + m * t1 + n * t2 with
//   t1 = epsilon * sin(beta),  t2 = epsilon * sin(gamma) * exp(i alpha),
// so lattice edges are parallel to 1, exp(i alpha) and exp(i (alpha + beta)).
struct LatticeSpec {
  double alpha = kPi / 3;
  double beta = kPi / 3;
  double gamma = kPi / 3;
  double epsilon = 1.0;
  Complex origin_offset{0.0, 0.0};

  // Validates the angles and scale; throws InvalidLattice.
  static LatticeSpec make(double alpha, double beta, double gamma, double epsilon,
                          Complex origin_offset = {});
  static LatticeSpec equilateral(double epsilon);

  void validate() const;
  LatticeSpec with_epsilon(double eps) const;

  Complex t1() const;
  Complex t2() const;
  Complex position(int m, int n) const;
  // Real lattice coordinates (s, t) with z = origin_offset + s t1 + t t2.
  std::array<double, 2> coordinates(Complex z) const;

  bool strictly_acute() const;
  bool is_equilateral(double tol = 1e-12) const;
};

// The six neighbor offsets of a lattice vertex in counterclockwise order,
// starting with +t1: t1, t2, t2 - t1, -t1, -t2, t1 - t2.
inline constexpr std::array<std::array<int, 2>, 6> kNeighborOffsets = {{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

// A lattice triangle. "Up" is [(m,n), (m+1,n), (m,n+1)],
// "down" is [(m+1,n), (m+1,n+1), (m,n+1)]; both counterclockwise.
struct LatticeTriangle {
  int m = 0;
  int n = 0;
  bool up = true;

  std::array<std::array<int, 2>, 3> corners() const;
  friend bool operator==(const LatticeTriangle&, const LatticeTriangle&) = default;
  friend auto operator<=>(const LatticeTriangle& a, const LatticeTriangle& b) {
    if (a.n != b.n) return a.n <=> b.n;
    if (a.m != b.m) return a.m <=> b.m;
    return b.up <=> a.up;
  }
};

// The j-th triangle of the star of (m, n), spanned by neighbor offsets j and j+1.
LatticeTriangle star_triangle(int m, int n, int j);

struct DiscRegion {
  Complex center;
  double radius = 1.0;
};

// Simple counterclockwise polygon.
struct PolygonRegion {
  std::vector<Complex> vertices;
};

struct Region {
  std::variant<DiscRegion, PolygonRegion> shape;

  static Region disc(Complex center, double radius);
  static Region polygon(std::vector<Complex> vertices);

  bool contains(Complex z) const;
  bool contains_triangle(Complex a, Complex b, Complex c) const;
  // Axis-aligned bounding box (min corner, max corner).
  std::array<Complex, 2> bounds() const;
};

struct Vertex {
  int m = 0;
  int n = 0;
  Complex position;
};

struct Triangle {
  std::array<int, 3> v;  // counterclockwise
  LatticeTriangle cell;
};

using Edge = std::array<int, 2>;  // v[0] < v[1]

inline constexpr int kNone = -1;

// A finite union of lattice triangles with vertex/edge/triangle incidence.
// Vertices, triangles and edges are ordered deterministically (row-major in
// lattice coordinates), so identical inputs give identical indexing.
class Subcomplex {
 public:
  // Builds incidence for an arbitrary set of lattice triangles; no topology
  // requirements are imposed.
  static Subcomplex from_triangles(const LatticeSpec& spec, std::vector<LatticeTriangle> cells);

  const LatticeSpec& spec() const { return spec_; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const int> interior_vertices() const { return interior_; }
  std::span<const int> boundary_vertices() const { return boundary_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool is_interior(int v) const { return interior_index_[v] != kNone; }
  // Position of v in interior_vertices(), or kNone.
  int interior_index(int v) const { return interior_index_[v]; }

  // Star of v in counterclockwise order; kNone where absent.
  const std::array<int, 6>& star_triangles(int v) const { return star_triangles_[v]; }
  // Neighbor across lattice direction k (see kNeighborOffsets) if the edge is present.
  const std::array<int, 6>& neighbors(int v) const { return neighbors_[v]; }

  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  const std::array<int, 2>& edge_triangles(int e) const { return edge_triangles_[e]; }

  std::optional<int> find_vertex(int m, int n) const;
  std::optional<int> find_triangle(const LatticeTriangle& cell) const;
  std::optional<int> find_edge(int a, int b) const;

  // Vertex at lattice coordinate (0, 0), kNone if absent.
  int origin_vertex() const { return origin_; }
  // Edge [origin, v0]; kNone if the origin is absent.
  int seed_edge() const { return seed_edge_; }
  // The endpoint v0 of the seed edge other than the origin.
  int seed_vertex() const;

  double diameter() const;

 private:
  LatticeSpec spec_;
  std::vector<Vertex> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  std::vector<int> interior_index_;
  std::vector<std::array<int, 6>> star_triangles_;
  std::vector<std::array<int, 6>> neighbors_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::unordered_map<long long, int> vertex_lookup_;
  std::unordered_map<long long, int> triangle_lookup_;
  std::unordered_map<long long, int> edge_lookup_;
  int origin_ = kNone;
  int seed_edge_ = kNone;
};

// Largest edge-connected set of lattice triangles inside `region` whose star
// contains vertex (0,0), pruned to disc topology.
// Throws RegionTooSmall or TopologyFailure.
Subcomplex build_lattice_patch(const LatticeSpec& spec, const Region& region);

struct VertexClasses {
  std::vector<int> interior;
  std::vector<int> boundary;
};

VertexClasses classify_vertices(const Subcomplex& sub);

struct TopologyReport {
  long long euler_characteristic = 0;
  bool connected = false;
  bool fans_contiguous = false;
  std::vector<int> pinch_vertices;
  bool pass = false;
};

TopologyReport validate_disc_topology(const Subcomplex& sub);

}  // namespace dcpl
