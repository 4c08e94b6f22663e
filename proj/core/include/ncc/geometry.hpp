#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ncc/datamodel.hpp"

namespace ncc {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Parallel-coordinates image of a point: vertex i sits at (i, c_i).
struct Polyline {
    std::vector<Point2> vertices;
};

Polyline to_polyline(std::span<const double> point);
/// Inverse of to_polyline.
std::vector<double> polyline_values(const Polyline& line);

/// Convex polygon with counter-clockwise vertices and no collinear triples.
/// One or two vertices describe a degenerate (point or segment) hull.
class Hull2D {
public:
    Hull2D() = default;

    const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }

    /// Closed membership: boundary points are inside, with a relative
    /// tolerance of `kTolerance` scaled by the hull's coordinate magnitude.
    bool contains(Point2 q) const noexcept;

    static constexpr double kTolerance = 1e-12;

private:
    friend Hull2D convex_hull_2d(std::span<const Point2> points);
    explicit Hull2D(std::vector<Point2> vertices);

    std::vector<Point2> vertices_;
    double tolerance_ = kTolerance;
};

/// Monotone-chain hull. Duplicates are merged and collinear points dropped.
/// Throws Error on empty input.
Hull2D convex_hull_2d(std::span<const Point2> points);

enum class SurfaceMode {
    Box,               ///< one [min, max] interval per axis
    AdjacentPairHull,  ///< one hull per consecutive axis pair (i, i+1)
    AllPairHull,       ///< one hull per unordered axis pair (i, j), i < j
};

const char* mode_name(SurfaceMode mode) noexcept;
/// Accepts the names produced by mode_name ("box", "adjacent", "allpairs").
SurfaceMode parse_mode(std::string_view name);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

struct AxisPair {
    std::size_t first = 0;
    std::size_t second = 0;
};

/// Panel layout of a mode in dimension `dim`. Empty for Box.
std::vector<AxisPair> panel_axes(SurfaceMode mode, std::size_t dim);

/// One closed hyper-surface S_k: the intersection of its panel constraints.
class Surface {
public:
    SurfaceMode mode() const noexcept { return mode_; }
    std::size_t dim() const noexcept { return dim_; }
    ClassId owner() const noexcept { return owner_; }
    int depth() const noexcept { return depth_; }

    std::size_t panel_count() const noexcept {
        return mode_ == SurfaceMode::Box ? intervals_.size() : hulls_.size();
    }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    const std::vector<AxisPair>& axes() const noexcept { return axes_; }
    const std::vector<Hull2D>& hulls() const noexcept { return hulls_; }

    /// Throws Error on dimension mismatch.
    bool contains(std::span<const double> x) const;

    static Surface box(std::vector<Interval> intervals, ClassId owner, int depth);
    static Surface hull_panels(SurfaceMode mode, std::size_t dim, std::vector<Hull2D> hulls,
                               ClassId owner, int depth);

private:
    SurfaceMode mode_ = SurfaceMode::Box;
    std::size_t dim_ = 0;
    ClassId owner_ = ClassId::Omega1;
    int depth_ = 1;
    std::vector<Interval> intervals_;
    std::vector<AxisPair> axes_;
    std::vector<Hull2D> hulls_;
};

/// Wraps the rows of `points` (n x p) in a surface of the given mode.
/// Hull modes need p >= 2. Throws Error when `points` is empty.
Surface wrap(const Matrix& points, SurfaceMode mode, ClassId owner, int depth);

inline bool contains(const Surface& s, std::span<const double> x) { return s.contains(x); }

/// Panel-wise containment of `inner` in `outer`: every interval or hull
/// vertex of `inner` lies within the matching panel of `outer`.
bool nested_within(const Surface& inner, const Surface& outer);

/// Nested surfaces S1 ⊇ S2 ⊇ ... ⊇ Sm with alternating owners.
struct CavityStack {
    std::vector<Surface> surfaces;
    int max_depth = 1;
    ClassId outer_owner = ClassId::Omega1;

    std::size_t depth() const noexcept { return surfaces.size(); }
    std::size_t dim() const noexcept { return surfaces.empty() ? 0 : surfaces.front().dim(); }
};

/// Repeatedly wraps the class enclosed by the previous surface, starting with
/// every `outer_owner` point, until nothing is enclosed or `max_depth` is hit.
CavityStack build_cavities(const Dataset& d, SurfaceMode mode, ClassId outer_owner,
                           int max_depth);

/// Largest k with x in S_k, or 0 when x is outside S1.
std::size_t deepest_surface(const CavityStack& stack, std::span<const double> x);

/// True iff x lies in the outer owner's region (S1-S2) ∪ (S3-S4) ∪ ...,
/// i.e. the deepest surface containing x has odd depth.
bool region_membership(const CavityStack& stack, std::span<const double> x);

}  // namespace ncc
