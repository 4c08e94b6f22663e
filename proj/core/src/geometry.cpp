#include "ncc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncc {

Polyline to_polyline(std::span<const double> point) {
    if (point.empty()) throw Error("polyline needs at least one coordinate");
    Polyline line;
    line.vertices.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (!std::isfinite(point[i]))
            throw Error("non-finite coordinate at index " + std::to_string(i));
        line.vertices.push_back({static_cast<double>(i), point[i]});
    }
    return line;
}

std::vector<double> polyline_values(const Polyline& line) {
    std::vector<double> out;
    out.reserve(line.vertices.size());
    for (const auto& v : line.vertices) out.push_back(v.y);
    return out;
}

namespace {

double cross(Point2 o, Point2 a, Point2 b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double norm(double dx, double dy) noexcept { return std::hypot(dx, dy); }

}  // namespace

Hull2D::Hull2D(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    double scale = 1.0;
    for (const auto& v : vertices_) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    tolerance_ = kTolerance * scale;
}

bool Hull2D::contains(Point2 q) const noexcept {
    const std::size_t n = vertices_.size();
    if (n == 0) return false;
    if (n == 1) {
        const Point2 a = vertices_[0];
        return std::abs(q.x - a.x) <= tolerance_ && std::abs(q.y - a.y) <= tolerance_;
    }
    if (n == 2) {
        const Point2 a = vertices_[0], b = vertices_[1];
        const double len = norm(b.x - a.x, b.y - a.y);
        if (std::abs(cross(a, b, q)) > tolerance_ * len) return false;
        const double along = (q.x - a.x) * (b.x - a.x) + (q.y - a.y) * (b.y - a.y);
        return along >= -tolerance_ * len && along <= len * len + tolerance_ * len;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = vertices_[i], b = vertices_[(i + 1) % n];
        if (cross(a, b, q) < -tolerance_ * norm(b.x - a.x, b.y - a.y)) return false;
    }
    return true;
}

Hull2D convex_hull_2d(std::span<const Point2> points) {
    if (points.empty()) throw Error("convex hull of an empty point set");
    std::vector<Point2> pts(points.begin(), points.end());
    auto lex = [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    };
    std::sort(pts.begin(), pts.end(), lex);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return Hull2D(std::move(pts));

    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return Hull2D(std::move(hull));
}

const char* mode_name(SurfaceMode mode) noexcept {
    switch (mode) {
    case SurfaceMode::Box:
        return "box";
    case SurfaceMode::AdjacentPairHull:
        return "adjacent";
    case SurfaceMode::AllPairHull:
        return "allpairs";
    }
    return "?";
}

SurfaceMode parse_mode(std::string_view name) {
    if (name == "box") return SurfaceMode::Box;
    if (name == "adjacent") return SurfaceMode::AdjacentPairHull;
    if (name == "allpairs") return SurfaceMode::AllPairHull;
    throw Error("unknown surface mode '" + std::string(name) + "'");
}

std::vector<AxisPair> panel_axes(SurfaceMode mode, std::size_t dim) {
    std::vector<AxisPair> axes;
    if (mode == SurfaceMode::AdjacentPairHull) {
        for (std::size_t i = 0; i + 1 < dim; ++i) axes.push_back({i, i + 1});
    } else if (mode == SurfaceMode::AllPairHull) {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) axes.push_back({i, j});
    }
    return axes;
}

Surface Surface::box(std::vector<Interval> intervals, ClassId owner, int depth) {
    if (intervals.empty()) throw Error("box surface needs at least one axis");
    for (const auto& iv : intervals)
        if (!(iv.lo <= iv.hi)) throw Error("box interval with lo > hi");
    Surface s;
    s.mode_ = SurfaceMode::Box;
    s.dim_ = intervals.size();
    s.owner_ = owner;
    s.depth_ = depth;
    s.intervals_ = std::move(intervals);
    return s;
}

Surface Surface::hull_panels(SurfaceMode mode, std::size_t dim, std::vector<Hull2D> hulls,
                             ClassId owner, int depth) {
    if (mode == SurfaceMode::Box) throw Error("hull_panels called with box mode");
    if (dim < 2) throw Error(std::string(mode_name(mode)) + " surfaces need p >= 2");
    Surface s;
    s.mode_ = mode;
    s.dim_ = dim;
    s.owner_ = owner;
    s.depth_ = depth;
    s.axes_ = panel_axes(mode, dim);
    if (hulls.size() != s.axes_.size()) throw Error("hull count does not match panel layout");
    for (const auto& h : hulls)
        if (h.size() == 0) throw Error("empty hull panel");
    s.hulls_ = std::move(hulls);
    return s;
}

bool Surface::contains(std::span<const double> x) const {
    if (x.size() != dim_)
        throw Error("dimension mismatch: surface has p=" + std::to_string(dim_) + ", point has " +
                    std::to_string(x.size()));
    if (mode_ == SurfaceMode::Box) {
        for (std::size_t i = 0; i < dim_; ++i)
            if (!intervals_[i].contains(x[i])) return false;
        return true;
    }
    for (std::size_t k = 0; k < hulls_.size(); ++k) {
        if (!hulls_[k].contains({x[axes_[k].first], x[axes_[k].second]})) return false;
    }
    return true;
}

Surface wrap(const Matrix& points, SurfaceMode mode, ClassId owner, int depth) {
    if (points.rows() == 0) throw Error("cannot wrap an empty point set");
    const auto dim = static_cast<std::size_t>(points.cols());
    if (mode == SurfaceMode::Box) {
        std::vector<Interval> iv(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const auto col = points.col(static_cast<Eigen::Index>(j));
            iv[j] = {col.minCoeff(), col.maxCoeff()};
        }
        return Surface::box(std::move(iv), owner, depth);
    }
    if (dim < 2) throw Error(std::string(mode_name(mode)) + " surfaces need p >= 2");
    std::vector<Hull2D> hulls;
    std::vector<Point2> proj(static_cast<std::size_t>(points.rows()));
    for (const auto& ax : panel_axes(mode, dim)) {
        for (Eigen::Index i = 0; i < points.rows(); ++i)
            proj[static_cast<std::size_t>(i)] = {points(i, static_cast<Eigen::Index>(ax.first)),
                                                 points(i, static_cast<Eigen::Index>(ax.second))};
        hulls.push_back(convex_hull_2d(proj));
    }
    return Surface::hull_panels(mode, dim, std::move(hulls), owner, depth);
}

bool nested_within(const Surface& inner, const Surface& outer) {
    if (inner.mode() != outer.mode() || inner.dim() != outer.dim()) return false;
    if (inner.mode() == SurfaceMode::Box) {
        for (std::size_t i = 0; i < inner.dim(); ++i) {
            const auto &a = inner.intervals()[i], &b = outer.intervals()[i];
            if (a.lo < b.lo || a.hi > b.hi) return false;
        }
        return true;
    }
    for (std::size_t k = 0; k < inner.hulls().size(); ++k) {
        for (const auto& v : inner.hulls()[k].vertices())
            if (!outer.hulls()[k].contains(v)) return false;
    }
    return true;
}

CavityStack build_cavities(const Dataset& d, SurfaceMode mode, ClassId outer_owner,
                           int max_depth) {
    if (max_depth < 1) throw Error("max_depth must be >= 1");
    if (d.count(outer_owner) == 0)
        throw Error(std::string("no observations of outer class ") + class_name(outer_owner));

    auto [omega1, omega2] = split_by_class(d);
    const Matrix& outer_pts = outer_owner == ClassId::Omega1 ? omega1 : omega2;
    const Matrix& inner_pts = outer_owner == ClassId::Omega1 ? omega2 : omega1;

    CavityStack stack;
    stack.max_depth = max_depth;
    stack.outer_owner = outer_owner;
    stack.surfaces.push_back(wrap(outer_pts, mode, outer_owner, 1));

    std::vector<Eigen::Index> keep;
    while (static_cast<int>(stack.surfaces.size()) < max_depth) {
        const Surface& last = stack.surfaces.back();
        const ClassId next_owner = other(last.owner());
        const Matrix& candidates = next_owner == outer_owner ? outer_pts : inner_pts;
        keep.clear();
        for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
            if (last.contains({candidates.row(i).data(), d.dim()})) keep.push_back(i);
        }
        if (keep.empty()) break;
        Matrix enclosed(static_cast<Eigen::Index>(keep.size()), candidates.cols());
        for (std::size_t r = 0; r < keep.size(); ++r)
            enclosed.row(static_cast<Eigen::Index>(r)) = candidates.row(keep[r]);
        stack.surfaces.push_back(
            wrap(enclosed, mode, next_owner, static_cast<int>(stack.surfaces.size()) + 1));
    }
    return stack;
}

std::size_t deepest_surface(const CavityStack& stack, std::span<const double> x) {
    std::size_t deepest = 0;
    for (std::size_t k = 0; k < stack.surfaces.size(); ++k)
        if (stack.surfaces[k].contains(x)) deepest = k + 1;
    return deepest;
}

bool region_membership(const CavityStack& stack, std::span<const double> x) {
    return deepest_surface(stack, x) % 2 == 1;
}

}  // namespace ncc
