#include "dcpl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "dcpl/errors.hpp"

namespace dcpl {

namespace {

constexpr long long kKeyBias = 1LL << 30;

long long vertex_key(int m, int n) {
  return ((static_cast<long long>(m) + kKeyBias) << 31) ^ (static_cast<long long>(n) + kKeyBias);
}

long long triangle_key(const LatticeTriangle& c) { return vertex_key(c.m, c.n) * 2 + (c.up ? 1 : 0); }

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Proper crossing of open segments [p0,p1] and [q0,q1].
bool segments_cross(Complex p0, Complex p1, Complex q0, Complex q1) {
  double d1 = cross(p1 - p0, q0 - p0);
  double d2 = cross(p1 - p0, q1 - p0);
  double d3 = cross(q1 - q0, p0 - q0);
  double d4 = cross(q1 - q0, p1 - q0);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Number of maximal runs of present triangles in a cyclic star.
int fan_segments(const std::array<bool, 6>& present) {
  int count = 0;
  for (int j = 0; j < 6; ++j) {
    if (present[j] && !present[(j + 5) % 6]) ++count;
  }
  if (count == 0 && present[0]) return 1;  // full star
  return count;
}

// Triangles across each of the three edges of a lattice triangle.
std::array<LatticeTriangle, 3> adjacent_cells(const LatticeTriangle& c) {
  if (c.up) {
    return {{{c.m, c.n, false}, {c.m - 1, c.n, false}, {c.m, c.n - 1, false}}};
  }
  return {{{c.m, c.n, true}, {c.m + 1, c.n, true}, {c.m, c.n + 1, true}}};
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticeSpec

LatticeSpec LatticeSpec::make(double alpha, double beta, double gamma, double epsilon,
                              Complex origin_offset) {
  LatticeSpec s{alpha, beta, gamma, epsilon, origin_offset};
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::equilateral(double epsilon) {
  return make(kPi / 3, kPi / 3, kPi / 3, epsilon);
}

void LatticeSpec::validate() const {
  for (double a : {alpha, beta, gamma}) {
    if (!(a > 0.0 && a < kPi)) throw InvalidLattice("lattice angle outside (0, pi)");
  }
  if (std::abs(alpha + beta + gamma - kPi) > 1e-12) {
    throw InvalidLattice("lattice angles must sum to pi");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidLattice("lattice scale must be positive");
}

LatticeSpec LatticeSpec::with_epsilon(double eps) const {
  LatticeSpec s = *this;
  s.epsilon = eps;
  s.validate();
  return s;
}

Complex LatticeSpec::t1() const { return {epsilon * std::sin(beta), 0.0}; }

Complex LatticeSpec::t2() const { return std::polar(epsilon * std::sin(gamma), alpha); }

Complex LatticeSpec::position(int m, int n) const {
  return origin_offset + static_cast<double>(m) * t1() + static_cast<double>(n) * t2();
}

std::array<double, 2> LatticeSpec::coordinates(Complex z) const {
  Complex d = z - origin_offset;
  Complex a = t1(), b = t2();
  double det = cross(a, b);
  return {cross(d, b) / det, cross(a, d) / det};
}

bool LatticeSpec::strictly_acute() const {
  return alpha < kPi / 2 && beta < kPi / 2 && gamma < kPi / 2;
}

bool LatticeSpec::is_equilateral(double tol) const {
  return std::abs(alpha - kPi / 3) <= tol && std::abs(beta - kPi / 3) <= tol &&
         std::abs(gamma - kPi / 3) <= tol;
}

std::array<std::array<int, 2>, 3> LatticeTriangle::corners() const {
  if (up) return {{{m, n}, {m + 1, n}, {m, n + 1}}};
  return {{{m + 1, n}, {m + 1, n + 1}, {m, n + 1}}};
}

LatticeTriangle star_triangle(int m, int n, int j) {
  switch (j) {
    case 0: return {m, n, true};
    case 1: return {m - 1, n, false};
    case 2: return {m - 1, n, true};
    case 3: return {m - 1, n - 1, false};
    case 4: return {m, n - 1, true};
    default: return {m, n - 1, false};
  }
}

// ---------------------------------------------------------------------------
// Region

Region Region::disc(Complex center, double radius) { return Region{DiscRegion{center, radius}}; }

Region Region::polygon(std::vector<Complex> vertices) {
  return Region{PolygonRegion{std::move(vertices)}};
}

bool Region::contains(Complex z) const {
  if (const auto* d = std::get_if<DiscRegion>(&shape)) return std::abs(z - d->center) <= d->radius;
  const auto& poly = std::get<PolygonRegion>(shape).vertices;
  const std::size_t k = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = k - 1; i < k; j = i++) {
    Complex a = poly[j], b = poly[i];
    // On-edge points count as inside (closed region).
    double c = cross(b - a, z - a);
    if (std::abs(c) <= 1e-14 * std::abs(b - a) && std::real((z - a) * std::conj(z - b)) <= 0.0) {
      return true;
    }
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

bool Region::contains_triangle(Complex a, Complex b, Complex c) const {
  if (!contains(a) || !contains(b) || !contains(c)) return false;
  if (std::holds_alternative<DiscRegion>(shape)) return true;  // convex: vertices suffice
  // Non-convex polygon: no polygon edge may cut through the triangle.
  if (!contains((a + b + c) / 3.0) || !contains((a + b) / 2.0) || !contains((b + c) / 2.0) ||
      !contains((c + a) / 2.0)) {
    return false;
  }
  const auto& poly = std::get<PolygonRegion>(shape).vertices;
  const std::array<Complex, 3> tri{a, b, c};
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    for (int e = 0; e < 3; ++e) {
      if (segments_cross(tri[e], tri[(e + 1) % 3], poly[j], poly[i])) return false;
    }
  }
  return true;
}

std::array<Complex, 2> Region::bounds() const {
  if (const auto* d = std::get_if<DiscRegion>(&shape)) {
    Complex r{d->radius, d->radius};
    return {d->center - r, d->center + r};
  }
  const auto& poly = std::get<PolygonRegion>(shape).vertices;
  double x0 = poly.front().real(), x1 = x0, y0 = poly.front().imag(), y1 = y0;
  for (Complex p : poly) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  return {Complex{x0, y0}, Complex{x1, y1}};
}

// ---------------------------------------------------------------------------
// Subcomplex

Subcomplex Subcomplex::from_triangles(const LatticeSpec& spec, std::vector<LatticeTriangle> cells) {
  spec.validate();
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  Subcomplex s;
  s.spec_ = spec;

  std::vector<std::array<int, 2>> coords;
  for (const auto& c : cells) {
    for (const auto& p : c.corners()) coords.push_back(p);
  }
  std::sort(coords.begin(), coords.end(), [](const auto& a, const auto& b) {
    return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
  });
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  s.vertices_.reserve(coords.size());
  for (const auto& [m, n] : coords) {
    s.vertex_lookup_.emplace(vertex_key(m, n), static_cast<int>(s.vertices_.size()));
    s.vertices_.push_back({m, n, spec.position(m, n)});
  }

  s.triangles_.reserve(cells.size());
  for (const auto& c : cells) {
    Triangle t{{}, c};
    auto cs = c.corners();
    for (int k = 0; k < 3; ++k) t.v[k] = *s.find_vertex(cs[k][0], cs[k][1]);
    s.triangle_lookup_.emplace(triangle_key(c), static_cast<int>(s.triangles_.size()));
    s.triangles_.push_back(t);
  }

  for (const auto& t : s.triangles_) {
    for (int k = 0; k < 3; ++k) {
      int a = t.v[k], b = t.v[(k + 1) % 3];
      s.edges_.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(s.edges_.begin(), s.edges_.end());
  s.edges_.erase(std::unique(s.edges_.begin(), s.edges_.end()), s.edges_.end());
  const long long nv = static_cast<long long>(s.vertices_.size());
  for (std::size_t e = 0; e < s.edges_.size(); ++e) {
    s.edge_lookup_.emplace(s.edges_[e][0] * nv + s.edges_[e][1], static_cast<int>(e));
  }

  s.edge_triangles_.assign(s.edges_.size(), {kNone, kNone});
  s.triangle_edges_.resize(s.triangles_.size());
  for (std::size_t t = 0; t < s.triangles_.size(); ++t) {
    const auto& v = s.triangles_[t].v;
    for (int k = 0; k < 3; ++k) {
      // edge k is opposite corner k
      int e = *s.find_edge(v[(k + 1) % 3], v[(k + 2) % 3]);
      s.triangle_edges_[t][k] = e;
      auto& et = s.edge_triangles_[e];
      (et[0] == kNone ? et[0] : et[1]) = static_cast<int>(t);
    }
  }

  s.star_triangles_.resize(s.vertices_.size());
  s.neighbors_.resize(s.vertices_.size());
  s.interior_index_.assign(s.vertices_.size(), kNone);
  for (std::size_t v = 0; v < s.vertices_.size(); ++v) {
    const auto& vx = s.vertices_[v];
    bool full = true;
    for (int j = 0; j < 6; ++j) {
      auto t = s.find_triangle(star_triangle(vx.m, vx.n, j));
      s.star_triangles_[v][j] = t.value_or(kNone);
      full = full && t.has_value();
    }
    for (int k = 0; k < 6; ++k) {
      s.neighbors_[v][k] = kNone;
      auto w = s.find_vertex(vx.m + kNeighborOffsets[k][0], vx.n + kNeighborOffsets[k][1]);
      if (w && s.find_edge(static_cast<int>(v), *w)) s.neighbors_[v][k] = *w;
    }
    if (full) {
      s.interior_index_[v] = static_cast<int>(s.interior_.size());
      s.interior_.push_back(static_cast<int>(v));
    } else {
      s.boundary_.push_back(static_cast<int>(v));
    }
  }

  if (auto o = s.find_vertex(0, 0)) {
    s.origin_ = *o;
    for (int k = 0; k < 6; ++k) {
      int w = s.neighbors_[*o][k];
      if (w != kNone) {
        s.seed_edge_ = *s.find_edge(*o, w);
        break;
      }
    }
  }
  return s;
}

std::optional<int> Subcomplex::find_vertex(int m, int n) const {
  auto it = vertex_lookup_.find(vertex_key(m, n));
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Subcomplex::find_triangle(const LatticeTriangle& cell) const {
  auto it = triangle_lookup_.find(triangle_key(cell));
  if (it == triangle_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Subcomplex::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = edge_lookup_.find(static_cast<long long>(a) * static_cast<long long>(vertices_.size()) + b);
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

int Subcomplex::seed_vertex() const {
  if (seed_edge_ == kNone) return kNone;
  const auto& e = edges_[seed_edge_];
  return e[0] == origin_ ? e[1] : e[0];
}

double Subcomplex::diameter() const {
  std::span<const int> pool = boundary_;
  std::vector<int> all;
  if (pool.empty()) {
    all.resize(vertices_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    pool = all;
  }
  double d = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      d = std::max(d, std::abs(vertices_[pool[i]].position - vertices_[pool[j]].position));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Patch construction

Subcomplex build_lattice_patch(const LatticeSpec& spec, const Region& region) {
  spec.validate();
  auto [lo, hi] = region.bounds();
  double smin = 1e300, smax = -1e300, tmin = 1e300, tmax = -1e300;
  for (Complex corner : {lo, hi, Complex{lo.real(), hi.imag()}, Complex{hi.real(), lo.imag()}}) {
    auto [s, t] = spec.coordinates(corner);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  const int m0 = static_cast<int>(std::floor(smin)) - 1, m1 = static_cast<int>(std::ceil(smax)) + 1;
  const int n0 = static_cast<int>(std::floor(tmin)) - 1, n1 = static_cast<int>(std::ceil(tmax)) + 1;

  std::set<LatticeTriangle> inside;
  for (int n = n0; n <= n1; ++n) {
    for (int m = m0; m <= m1; ++m) {
      for (bool up : {true, false}) {
        LatticeTriangle c{m, n, up};
        auto cs = c.corners();
        if (region.contains_triangle(spec.position(cs[0][0], cs[0][1]), spec.position(cs[1][0], cs[1][1]),
                                     spec.position(cs[2][0], cs[2][1]))) {
          inside.insert(c);
        }
      }
    }
  }
  if (inside.empty()) throw RegionTooSmall("no lattice triangle fits inside the region");

  const std::size_t max_rounds = inside.size() + 1;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    // Edge-connected component through the star of (0,0).
    std::set<LatticeTriangle> component;
    std::deque<LatticeTriangle> queue;
    for (int j = 0; j < 6; ++j) {
      auto c = star_triangle(0, 0, j);
      if (inside.count(c)) {
        component.insert(c);
        queue.push_back(c);
        break;
      }
    }
    while (!queue.empty()) {
      auto c = queue.front();
      queue.pop_front();
      for (const auto& nb : adjacent_cells(c)) {
        if (inside.count(nb) && component.insert(nb).second) queue.push_back(nb);
      }
    }
    for (int j = 0; j < 6; ++j) {
      if (!component.count(star_triangle(0, 0, j))) {
        throw RegionTooSmall("lattice vertex (0,0) is not an interior vertex of the patch");
      }
    }

    // Pinch points: keep only the largest contiguous fan at each such vertex.
    std::set<std::array<int, 2>> verts;
    for (const auto& c : component) {
      for (const auto& p : c.corners()) verts.insert(p);
    }
    std::vector<LatticeTriangle> removal;
    for (const auto& [m, n] : verts) {
      std::array<bool, 6> present{};
      for (int j = 0; j < 6; ++j) present[j] = component.count(star_triangle(m, n, j)) > 0;
      if (fan_segments(present) <= 1) continue;
      int best_start = -1, best_len = 0;
      for (int j = 0; j < 6; ++j) {
        if (!present[j] || present[(j + 5) % 6]) continue;
        int len = 0;
        while (len < 6 && present[(j + len) % 6]) ++len;
        if (len > best_len) {
          best_len = len;
          best_start = j;
        }
      }
      for (int j = 0; j < 6; ++j) {
        int rel = (j - best_start + 6) % 6;
        if (present[j] && rel >= best_len) removal.push_back(star_triangle(m, n, j));
      }
    }

    if (removal.empty()) {
      Subcomplex sub = Subcomplex::from_triangles(spec, {component.begin(), component.end()});
      auto report = validate_disc_topology(sub);
      if (!report.pass) {
        throw TopologyFailure("lattice patch is not a disc (Euler characteristic " +
                              std::to_string(report.euler_characteristic) + ")");
      }
      return sub;
    }
    for (const auto& c : removal) inside.erase(c);
  }
  throw TopologyFailure("pruning did not reach disc topology");
}

VertexClasses classify_vertices(const Subcomplex& sub) {
  VertexClasses out;
  for (std::size_t v = 0; v < sub.num_vertices(); ++v) {
    int fan = 0;
    for (int t : sub.star_triangles(static_cast<int>(v))) fan += t != kNone ? 1 : 0;
    (fan == 6 ? out.interior : out.boundary).push_back(static_cast<int>(v));
  }
  return out;
}

TopologyReport validate_disc_topology(const Subcomplex& sub) {
  TopologyReport r;
  r.euler_characteristic = static_cast<long long>(sub.num_vertices()) -
                           static_cast<long long>(sub.num_edges()) +
                           static_cast<long long>(sub.num_triangles());

  if (sub.num_triangles() > 0) {
    std::vector<char> seen(sub.num_triangles(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      for (int e : sub.triangle_edges(t)) {
        for (int nb : sub.edge_triangles(e)) {
          if (nb != kNone && !seen[nb]) {
            seen[nb] = 1;
            ++reached;
            queue.push_back(nb);
          }
        }
      }
    }
    r.connected = reached == sub.num_triangles();
  }

  for (std::size_t v = 0; v < sub.num_vertices(); ++v) {
    std::array<bool, 6> present{};
    for (int j = 0; j < 6; ++j) present[j] = sub.star_triangles(static_cast<int>(v))[j] != kNone;
    if (fan_segments(present) != 1) r.pinch_vertices.push_back(static_cast<int>(v));
  }
  r.fans_contiguous = r.pinch_vertices.empty();
  r.pass = sub.num_triangles() > 0 && r.connected && r.fans_contiguous && r.euler_characteristic == 1;
  return r;
}

}  // namespace dcpl
