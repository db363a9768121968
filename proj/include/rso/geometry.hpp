#pragma once
// Lattice geometry of Z^2: boxes, tilted rectangles, sparsity of frozen sets,
// covers, nets and the defect-graph distance.
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rso {

struct Site {
  int x = 0, y = 0;
  auto operator<=>(const Site&) const = default;
};

using SiteSet = std::set<Site>;

// axis-aligned box corner + [0,side)^2
struct Square {
  Site corner;
  int side = 1;
  bool aligned = false;

  int x0() const { return corner.x; }
  int y0() const { return corner.y; }
  int x1() const { return corner.x + side - 1; }
  int y1() const { return corner.y + side - 1; }
  long area() const { return long(side) * side; }
  bool contains(Site s) const { return s.x >= x0() && s.x <= x1() && s.y >= y0() && s.y <= y1(); }
  bool contains(const Square& q) const {
    return q.x0() >= x0() && q.x1() <= x1() && q.y0() >= y0() && q.y1() <= y1();
  }
  bool intersects(const Square& q) const {
    return q.x0() <= x1() && x0() <= q.x1() && q.y0() <= y1() && y0() <= q.y1();
  }
  // row-major index, x fastest
  int index(Site s) const { return (s.y - y0()) * side + (s.x - x0()); }
  Site site(int i) const { return {x0() + i % side, y0() + i / side}; }
  bool operator==(const Square&) const = default;
};

// x + [0,2^n)^2 with x on the half grid 2^(n-1) Z^2
Square aligned_square(Site corner, int log2side);
bool is_aligned(const Square& q);

struct IntRange {
  int lo = 0, hi = 0;
  int size() const { return hi - lo + 1; }
  bool operator==(const IntRange&) const = default;
};

// {(x,y): (x+y, x-y) in s x t}
struct TiltedRect {
  IntRange s, t;
  bool contains_st(int ss, int tt) const {
    return ((ss + tt) & 1) == 0 && ss >= s.lo && ss <= s.hi && tt >= t.lo && tt <= t.hi;
  }
  bool contains(Site p) const { return contains_st(p.x + p.y, p.x - p.y); }
  bool is_square() const { return s.size() == t.size(); }
  long site_count() const;
  std::vector<Site> sites() const;
  bool operator==(const TiltedRect&) const = default;
};

TiltedRect tilted_rect(int s1, int s2, int t1, int t2);

std::pair<int, int> to_tilted(Site p);
Site from_tilted(int s, int t);

// Concentric rescaling by an area factor in {1/64, 1/4, 1/2, 1, 2, 4}.
// New side = ceil(side * sqrt(factor)), at least 1.
Square scale_square(const Square& q, double area_factor);
TiltedRect scale_square(const TiltedRect& q, double area_factor);

SiteSet west_boundary(const TiltedRect& r);
TiltedRect interior(const TiltedRect& r);

std::vector<std::pair<Site, Site>> box_boundary(const Square& inner, const Square& outer);

bool is_sparse(const SiteSet& f, const TiltedRect& r, double eps);

struct RegularityVerdict {
  enum Kind { CertifiedRegular, CertifiedIrregular, Unknown };
  Kind kind = Unknown;
  std::vector<TiltedRect> witness;  // disjoint non-sparse subsquares
  long witness_sites = 0;           // |union of witness|
  long union_sites = 0;             // |union of all non-sparse subsquares|
  long nonsparse_count = 0;
  long q_sites = 0;
};

const char* to_string(RegularityVerdict::Kind k);

// Sound in both directions: an irregularity witness is a real packing, and the
// regular certificate bounds every packing by the union of all non-sparse
// subsquares.
RegularityVerdict regularity_check(const SiteSet& f, const TiltedRect& q, double eps);

// Tilted squares whose 1/64-shrinks tile half the box.
std::vector<TiltedRect> covering_tilted_squares(const Square& box);

struct CoveringReport {
  bool half_covered = false;    // (A)
  bool inside_box = false;      // (B)
  bool min_side_ok = false;     // (C)
  bool count_ok = false;        // (D)
  int min_side = 0;
  std::size_t count = 0;
  bool all() const { return half_covered && inside_box && min_side_ok && count_ok; }
};
CoveringReport verify_covering(const Square& box, const std::vector<TiltedRect>& qs);

struct CoverResult {
  int L_tilde = 0;
  std::vector<Square> covers;  // covers[i] holds bad[i]; clustered defects share a cover
  double alpha_used = 1.0;     // L_tilde / L1
};

// Covers bad squares by squares of a common dyadic side in [L1, alpha*L1],
// each bad square at distance >= L1/8 from the complement of its cover.
CoverResult cover_defects(const Square& box, const std::vector<Square>& bad, int L1, int alpha);

// Euclidean distance from p to box \ cover, +inf when cover contains the box.
double dist_to_complement(const Square& box, const Square& cover, const Square& inner);

enum class Metric { Euclidean, Linf };
double site_distance(Site a, Site b, Metric m);
bool is_r_net(const SiteSet& x, const Square& box, double r, Metric m = Metric::Euclidean);

struct DefectGraph {
  Square box;
  std::vector<Square> defects;
  int shortcut_weight = 1;  // L3
};

// Shortest-path distance with l-infinity direct edges of weight |x-y| and
// shortcut edges of weight -L3 from deep defect sites to the outer ring.
class DefectDistance {
 public:
  explicit DefectDistance(DefectGraph g);
  long operator()(Site x, Site y) const;
  // |x-y| - sum over defects of the largest saving one shortcut can give
  long lower_bound(Site x, Site y) const;
  int deep_margin(std::size_t k) const { return deep_[k]; }
  const DefectGraph& graph() const { return g_; }
  bool is_deep(std::size_t k, Site p) const;
  bool is_outer(std::size_t k, Site p) const;

 private:
  struct Rect {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
    bool empty() const { return x1 < x0 || y1 < y0; }
  };
  long dist_deep(std::size_t k, Site p) const;

  DefectGraph g_;
  std::vector<int> deep_;                    // ceil(side/8)
  std::vector<Rect> deep_rect_;              // deep sites of defect k (may be empty)
  std::vector<std::vector<Site>> ring_;      // outer ring of defect k within box
  std::vector<std::vector<long>> ring_to_deep_;  // D(ring_j, deep_k)
};

long linf(Site a, Site b);
long defect_graph_distance(const DefectGraph& g, Site x, Site y);

nlohmann::json to_json(const Square& q);
nlohmann::json to_json(const TiltedRect& r);
nlohmann::json to_json(const SiteSet& s);
Square square_from_json(const nlohmann::json& j);

}  // namespace rso
