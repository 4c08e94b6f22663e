#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "ncc/report.hpp"

namespace ncc {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

/// Minimal append-only SVG document.
class Svg {
public:
    Svg(int width, int height) {
        body_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                 std::to_string(width) + "\" height=\"" + std::to_string(height) +
                 "\" viewBox=\"0 0 " + std::to_string(width) + ' ' + std::to_string(height) +
                 "\">\n";
        body_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
                 std::to_string(height) + "\" fill=\"white\"/>\n";
    }

    void raw(std::string_view s) { body_ += s; }

    void line(double x1, double y1, double x2, double y2, std::string_view attrs) {
        body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                 "\" y2=\"" + num(y2) + "\" " + std::string(attrs) + "/>\n";
    }

    void text(double x, double y, std::string_view s, std::string_view attrs = {}) {
        body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" " +
                 "font-size=\"12\" " + std::string(attrs) + ">" + escape(s) + "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view attrs,
                  std::string_view tag = "polyline") {
        body_ += '<' + std::string(tag) + " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ += ' ';
            body_ += num(pts[i].first) + ',' + num(pts[i].second);
        }
        body_ += "\" " + std::string(attrs) + "/>\n";
    }

    std::string finish() {
        body_ += "</svg>\n";
        return std::move(body_);
    }

private:
    std::string body_;
};

/// Maps a data interval onto a pixel interval, padding degenerate ranges.
struct Scale {
    double d0, d1, p0, p1;
    static Scale make(double lo, double hi, double p0, double p1) {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        return {lo, hi, p0, p1};
    }
    double operator()(double v) const { return p0 + (v - d0) / (d1 - d0) * (p1 - p0); }
};

const std::string& class_color(ClassId c, const FigureStyle& s) {
    return c == ClassId::Omega1 ? s.omega1_color : s.omega2_color;
}

const CavityStack& stack_of(const Model& m) {
    if (const auto* ncc = std::get_if<NccModel>(&m)) return ncc->stack;
    if (const auto* ncda = std::get_if<NcdaModel>(&m)) return ncda->ncc.stack;
    throw Error("region rendering needs an NCC or NCDA model");
}

std::string surface_stroke(const Surface& s) {
    std::string attrs = "fill=\"none\" stroke=\"black\" stroke-width=\"" +
                        num(s.depth() == 1 ? 1.5 : 2.0) + "\"";
    if (s.depth() == 1) attrs += " stroke-dasharray=\"6,4\"";
    return attrs;
}

}  // namespace

std::string render_parcoords(const Dataset& data, const CavityStack* stack,
                             const FigureStyle& style) {
    const std::size_t p = stack && stack->dim() ? stack->dim() : data.dim();
    if (p < 2) throw Error("parallel-coordinates rendering needs p >= 2");
    if (!data.empty() && data.dim() != p) throw Error("dataset and stack differ in dimension");

    double lo = INFINITY, hi = -INFINITY;
    auto extend = [&](double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    for (Eigen::Index i = 0; i < data.features().size(); ++i) extend(data.features().data()[i]);
    if (stack) {
        for (const auto& s : stack->surfaces) {
            for (const auto& iv : s.intervals()) {
                extend(iv.lo);
                extend(iv.hi);
            }
            for (const auto& h : s.hulls())
                for (const auto& v : h.vertices()) {
                    extend(v.x);
                    extend(v.y);
                }
        }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;

    const double margin = 40.0;
    const Scale sx = Scale::make(0.0, static_cast<double>(p - 1), margin, style.width - margin);
    const Scale sy = Scale::make(lo, hi, style.height - margin, margin);
    Svg svg(style.width, style.height);

    svg.raw("<g class=\"axes\">\n");
    for (std::size_t i = 0; i < p; ++i) {
        const double x = sx(static_cast<double>(i));
        svg.line(x, margin, x, style.height - margin, "stroke=\"#444\" stroke-width=\"1\"");
        svg.text(x - 8, style.height - margin + 18, "X̅" + std::to_string(i + 1));
    }
    svg.raw("</g>\n");

    svg.raw("<g class=\"observations\">\n");
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto line = to_polyline(data.row(i));
        std::vector<std::pair<double, double>> pts;
        for (const auto& v : line.vertices) pts.emplace_back(sx(v.x), sy(v.y));
        svg.polyline(pts, "class=\"obs\" fill=\"none\" stroke=\"" +
                              class_color(data.label(i), style) +
                              "\" stroke-opacity=\"0.6\" stroke-width=\"1\"");
    }
    svg.raw("</g>\n");

    if (stack) {
        for (const auto& s : stack->surfaces) {
            svg.raw("<g class=\"surface\" data-depth=\"" + std::to_string(s.depth()) +
                    "\" data-owner=\"" + std::to_string(label_code(s.owner())) + "\" " +
                    surface_stroke(s) + ">\n");
            if (s.mode() == SurfaceMode::Box) {
                // envelope through the interval ends on consecutive axes
                std::vector<std::pair<double, double>> ring;
                for (std::size_t i = 0; i < p; ++i)
                    ring.emplace_back(sx(static_cast<double>(i)), sy(s.intervals()[i].hi));
                for (std::size_t i = p; i-- > 0;)
                    ring.emplace_back(sx(static_cast<double>(i)), sy(s.intervals()[i].lo));
                svg.polyline(ring, "class=\"panel\"", "polygon");
            } else {
                // a panel point (u, v) on axes (a, b) is the segment (a, u)-(b, v)
                for (std::size_t k = 0; k < s.hulls().size(); ++k) {
                    const auto& ax = s.axes()[k];
                    svg.raw("<g class=\"panel\">\n");
                    for (const auto& v : s.hulls()[k].vertices())
                        svg.line(sx(static_cast<double>(ax.first)), sy(v.x),
                                 sx(static_cast<double>(ax.second)), sy(v.y), "");
                    svg.raw("</g>\n");
                }
            }
            svg.raw("</g>\n");
        }
    }
    return svg.finish();
}

Point2 RegionGrid::cell_center(int i, int j) const noexcept {
    const double w = (xmax - xmin) / resolution, h = (ymax - ymin) / resolution;
    return {xmin + (i + 0.5) * w, ymin + (j + 0.5) * h};
}

std::vector<ClassId> classify_grid(const Model& model, const RegionGrid& grid) {
    if (model_dim(model) != 2) throw Error("REGION2D requires p=2");
    if (grid.resolution < 1) throw Error("grid resolution must be >= 1");
    if (!(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin)) throw Error("empty grid bounds");
    std::vector<ClassId> out;
    out.reserve(static_cast<std::size_t>(grid.resolution) * grid.resolution);
    for (int j = 0; j < grid.resolution; ++j)
        for (int i = 0; i < grid.resolution; ++i) {
            const Point2 c = grid.cell_center(i, j);
            const double x[2] = {c.x, c.y};
            out.push_back(predict(model, x));
        }
    return out;
}

std::string render_regions_2d(const Model& model, const RegionGrid& grid, const Dataset* training,
                              const FigureStyle& style) {
    if (model_dim(model) != 2) throw Error("REGION2D requires p=2");
    const CavityStack& stack = stack_of(model);
    if (training && training->dim() != 2) throw Error("REGION2D requires p=2");
    const auto cells = classify_grid(model, grid);

    const double margin = 40.0;
    const Scale sx = Scale::make(grid.xmin, grid.xmax, margin, style.width - margin);
    const Scale sy = Scale::make(grid.ymin, grid.ymax, style.height - margin, margin);
    const double cw = (grid.xmax - grid.xmin) / grid.resolution;
    const double ch = (grid.ymax - grid.ymin) / grid.resolution;
    Svg svg(style.width, style.height);

    svg.raw("<g class=\"regions\" stroke=\"none\">\n");
    std::size_t idx = 0;
    for (int j = 0; j < grid.resolution; ++j) {
        for (int i = 0; i < grid.resolution; ++i, ++idx) {
            const double x0 = sx(grid.xmin + i * cw), x1 = sx(grid.xmin + (i + 1) * cw);
            const double y0 = sy(grid.ymin + (j + 1) * ch), y1 = sy(grid.ymin + j * ch);
            const ClassId c = cells[idx];
            svg.raw("<rect class=\"" + std::string(c == ClassId::Omega1 ? "w1" : "w2") +
                    "\" x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) +
                    "\" height=\"" + num(y1 - y0) + "\" fill=\"" + class_color(c, style) +
                    "\" fill-opacity=\"0.25\"/>\n");
        }
    }
    svg.raw("</g>\n");

    for (const auto& s : stack.surfaces) {
        svg.raw("<g class=\"surface\" data-depth=\"" + std::to_string(s.depth()) + "\" " +
                surface_stroke(s) + ">\n");
        std::vector<std::pair<double, double>> ring;
        if (s.mode() == SurfaceMode::Box) {
            const auto &ix = s.intervals()[0], &iy = s.intervals()[1];
            ring = {{sx(ix.lo), sy(iy.lo)}, {sx(ix.hi), sy(iy.lo)},
                    {sx(ix.hi), sy(iy.hi)}, {sx(ix.lo), sy(iy.hi)}};
        } else {
            for (const auto& v : s.hulls().front().vertices()) ring.emplace_back(sx(v.x), sy(v.y));
        }
        svg.polyline(ring, "class=\"boundary\"", "polygon");
        svg.raw("</g>\n");
    }

    if (training) {
        auto on_boundary = [&](std::span<const double> x) {
            for (const auto& s : stack.surfaces) {
                if (s.mode() == SurfaceMode::Box) {
                    const auto &ix = s.intervals()[0], &iy = s.intervals()[1];
                    if (s.contains(x) &&
                        (x[0] == ix.lo || x[0] == ix.hi || x[1] == iy.lo || x[1] == iy.hi))
                        return true;
                } else {
                    for (const auto& v : s.hulls().front().vertices())
                        if (v.x == x[0] && v.y == x[1]) return true;
                }
            }
            return false;
        };
        svg.raw("<g class=\"training\">\n");
        for (std::size_t i = 0; i < training->size(); ++i) {
            const auto x = training->row(i);
            const bool bold = on_boundary(x);
            svg.raw("<circle class=\"" + std::string(bold ? "obs bold" : "obs") + "\" cx=\"" +
                    num(sx(x[0])) + "\" cy=\"" + num(sy(x[1])) + "\" r=\"" +
                    num(bold ? 3.5 : 2.5) + "\" fill=\"" +
                    class_color(training->label(i), style) + "\" stroke=\"black\" stroke-width=\"" +
                    num(bold ? 1.5 : 0.0) + "\"/>\n");
        }
        svg.raw("</g>\n");
    }
    svg.text(margin, margin - 12, "S1 dashed, deeper surfaces solid");
    return svg.finish();
}

std::vector<CurveSeries> curve_series(const std::vector<SummaryRow>& rows) {
    if (rows.empty()) throw Error("no rows to plot");
    for (const auto& r : rows)
        if (r.experiment != rows.front().experiment)
            throw Error("curve rendering takes rows from a single experiment");

    std::vector<std::string> order;
    std::set<std::size_t> dims;
    for (const auto& r : rows) {
        if (std::find(order.begin(), order.end(), r.classifier) == order.end())
            order.push_back(r.classifier);
        dims.insert(r.p);
    }
    std::vector<CurveSeries> out;
    for (auto p : dims) {
        for (const auto& name : order) {
            std::vector<const SummaryRow*> sel;
            for (const auto& r : rows)
                if (r.p == p && r.classifier == name && r.n > 0) sel.push_back(&r);
            if (sel.empty()) continue;
            std::sort(sel.begin(), sel.end(),
                      [](const SummaryRow* a, const SummaryRow* b) { return a->n > b->n; });
            CurveSeries s{name, p, {}, {}, {}};
            for (const auto* r : sel) {
                s.x.push_back(1.0 / static_cast<double>(r->n));
                s.mean.push_back(r->mean_err);
                s.std.push_back(r->std_err);
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::string render_curves(const std::vector<SummaryRow>& rows, const FigureStyle& style) {
    const auto series = curve_series(rows);
    std::vector<std::size_t> dims;
    std::vector<std::string> names;
    for (const auto& s : series) {
        if (std::find(dims.begin(), dims.end(), s.p) == dims.end()) dims.push_back(s.p);
        if (std::find(names.begin(), names.end(), s.classifier) == names.end())
            names.push_back(s.classifier);
    }
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    auto color_of = [&](const std::string& name) {
        const auto k = static_cast<std::size_t>(std::find(names.begin(), names.end(), name) -
                                                names.begin());
        return std::string(palette[k % std::size(palette)]);
    };

    const double panel_w = style.width / 2.0, panel_h = style.height;
    Svg svg(style.width, static_cast<int>(panel_h * static_cast<double>(dims.size())));
    const double margin = 45.0;

    for (std::size_t d = 0; d < dims.size(); ++d) {
        double xmax = 0.0, mean_max = 0.0, std_max = 0.0;
        for (const auto& s : series) {
            if (s.p != dims[d]) continue;
            for (double v : s.x) xmax = std::max(xmax, v);
            for (double v : s.mean) mean_max = std::max(mean_max, v);
            for (double v : s.std) std_max = std::max(std_max, v);
        }
        for (int panel = 0; panel < 2; ++panel) {
            const double ox = panel * panel_w, oy = static_cast<double>(d) * panel_h;
            const double ymax = panel == 0 ? std::max(mean_max * 1.05, 0.05)
                                           : std::max(std_max * 1.05, 0.005);
            const Scale sx = Scale::make(0.0, xmax * 1.05, ox + margin, ox + panel_w - 15.0);
            const Scale sy = Scale::make(0.0, ymax, oy + panel_h - margin, oy + 25.0);
            const std::string what = panel == 0 ? "mean" : "std";
            svg.raw("<g class=\"panel\" data-stat=\"" + what + "\" data-p=\"" +
                    std::to_string(dims[d]) + "\">\n");
            svg.line(sx(0.0), sy(0.0), sx(xmax * 1.05), sy(0.0), "stroke=\"black\"");
            svg.line(sx(0.0), sy(0.0), sx(0.0), sy(ymax), "stroke=\"black\"");
            svg.text(ox + margin, oy + 16,
                     "p=" + std::to_string(dims[d]) + (panel == 0 ? ": mean Err" : ": std Err"));
            svg.text(sx(xmax * 1.05) - 20, sy(0.0) + 28, "1/n");
            for (int t = 0; t <= 4; ++t) {
                const double v = ymax * t / 4.0;
                svg.text(ox + 2, sy(v) + 4, num(v), "font-size=\"9\"");
            }
            for (const auto& s : series) {
                if (s.p != dims[d]) continue;
                const auto& ys = panel == 0 ? s.mean : s.std;
                std::vector<std::pair<double, double>> pts;
                for (std::size_t i = 0; i < s.x.size(); ++i) pts.emplace_back(sx(s.x[i]), sy(ys[i]));
                svg.polyline(pts, "class=\"series\" data-classifier=\"" + escape(s.classifier) +
                                      "\" fill=\"none\" stroke=\"" + color_of(s.classifier) +
                                      "\" stroke-width=\"1.5\"");
            }
            svg.raw("</g>\n");
        }
    }
    svg.raw("<g class=\"legend\">\n");
    for (std::size_t k = 0; k < names.size(); ++k) {
        const double y = 14.0 + 14.0 * static_cast<double>(k);
        svg.line(style.width - 110.0, y - 4, style.width - 90.0, y - 4,
                 "stroke=\"" + color_of(names[k]) + "\" stroke-width=\"2\"");
        svg.text(style.width - 85.0, y, names[k]);
    }
    svg.raw("</g>\n");
    return svg.finish();
}

}  // namespace ncc
