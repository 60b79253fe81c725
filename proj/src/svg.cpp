#include "ftloc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ftloc {

namespace {

class Writer {
public:
    explicit Writer(int precision) : prec_(precision) {}
    std::string num(double v) const {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.*f", prec_, v);
        std::string s(buf);
        if (s.find('.') != std::string::npos) {
            while (s.back() == '0') s.pop_back();
            if (s.back() == '.') s.pop_back();
        }
        return s == "-0" ? "0" : s;
    }

private:
    int prec_;
};

const char* palette(size_t i) {
    static const char* colors[] = {"#1f4e79", "#2e75b6", "#4a9a5b", "#9bbb59", "#e3a21a", "#d9602b", "#b03a2e"};
    return colors[i % 7];
}

}  // namespace

void PlotSpec::validate() const {
    if (!(high.x() > low.x()) || !(high.y() > low.y())) throw PreconditionError("plot view box must have positive size");
    if (!std::is_sorted(levels.begin(), levels.end())) throw PreconditionError("plot levels must be ascending");
    if (raster < 2) throw PreconditionError("plot raster must be at least 2");
}

PlotSpec default_plot(const Instance& inst) {
    PlotSpec spec;
    Point2 lo(1e300, 1e300), hi(-1e300, -1e300);
    for (const Site& s : inst.sites) {
        Vec a = s.set.anchor();
        double r = s.set.bounded() ? s.set.spread() : 0.0;
        lo = lo.cwiseMin(Point2(a(0) - r, a(1) - r));
        hi = hi.cwiseMax(Point2(a(0) + r, a(1) + r));
    }
    Point2 c = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo).maxCoeff();
    half = 1.5 * half + 1.0;
    spec.low = c - Point2(half, half);
    spec.high = c + Point2(half, half);
    return spec;
}

std::string render_svg(const Instance& inst, const PlotSpec& spec) {
    inst.validate();
    if (inst.dimension != 2) throw PreconditionError("plots require a planar instance");
    spec.validate();
    const int N = spec.raster;
    const double W = 400.0, H = 400.0 * (spec.high.y() - spec.low.y()) / (spec.high.x() - spec.low.x());
    Writer w(spec.precision);
    auto px = [&](const Point2& p) {
        return Point2((p.x() - spec.low.x()) / (spec.high.x() - spec.low.x()) * W,
                      (spec.high.y() - p.y()) / (spec.high.y() - spec.low.y()) * H);
    };

    Objective f(inst);
    std::vector<double> F(static_cast<size_t>(N + 1) * (N + 1));
    auto at = [&](int i, int j) -> double& { return F[static_cast<size_t>(j) * (N + 1) + i]; };
    auto coord = [&](double i, double j) {
        return Point2(spec.low.x() + (spec.high.x() - spec.low.x()) * i / N,
                      spec.low.y() + (spec.high.y() - spec.low.y()) * j / N);
    };
    Vec x(2);
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i) {
            Point2 p = coord(i, j);
            x << p.x(), p.y();
            at(i, j) = f(x);
        }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w.num(W) << "\" height=\"" << w.num(H)
        << "\" viewBox=\"0 0 " << w.num(W) << " " << w.num(H) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (size_t li = 0; li < spec.levels.size(); ++li) {
        const double level = spec.levels[li];
        std::string d;
        auto edge_point = [&](int i0, int j0, int i1, int j1) {
            double a = at(i0, j0) - level, b = at(i1, j1) - level;
            double t = a == b ? 0.5 : a / (a - b);
            return coord(i0 + t * (i1 - i0), j0 + t * (j1 - j0));
        };
        auto seg = [&](const Point2& p, const Point2& q) {
            Point2 a = px(p), b = px(q);
            d += "M" + w.num(a.x()) + " " + w.num(a.y()) + "L" + w.num(b.x()) + " " + w.num(b.y());
        };
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                // Corners counter-clockwise from the lower left.
                int c = (at(i, j) > level) | (at(i + 1, j) > level) << 1 | (at(i + 1, j + 1) > level) << 2 |
                        (at(i, j + 1) > level) << 3;
                if (c == 0 || c == 15) continue;
                Point2 e0 = edge_point(i, j, i + 1, j);          // bottom
                Point2 e1 = edge_point(i + 1, j, i + 1, j + 1);  // right
                Point2 e2 = edge_point(i, j + 1, i + 1, j + 1);  // top
                Point2 e3 = edge_point(i, j, i, j + 1);          // left
                switch (c) {
                    case 1: case 14: seg(e3, e0); break;
                    case 2: case 13: seg(e0, e1); break;
                    case 3: case 12: seg(e3, e1); break;
                    case 4: case 11: seg(e1, e2); break;
                    case 6: case 9: seg(e0, e2); break;
                    case 7: case 8: seg(e3, e2); break;
                    case 5: case 10: {
                        double center = 0.25 * (at(i, j) + at(i + 1, j) + at(i + 1, j + 1) + at(i, j + 1));
                        bool high_center = center > level;
                        if ((c == 5) == high_center) {
                            seg(e3, e2);
                            seg(e0, e1);
                        } else {
                            seg(e3, e0);
                            seg(e1, e2);
                        }
                        break;
                    }
                }
            }
        out << "<path class=\"level\" data-level=\"" << level << "\" fill=\"none\" stroke=\"" << palette(li)
            << "\" stroke-width=\"" << w.num(spec.stroke) << "\" d=\"" << d << "\"/>\n";
    }

    if (spec.overlay && spec.overlay->rank != Polygon::Rank::Empty) {
        std::string pts;
        for (const Point2& v : spec.overlay->vertices) {
            Point2 q = px(v);
            pts += w.num(q.x()) + "," + w.num(q.y()) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        if (spec.overlay->rank == Polygon::Rank::Point) {
            Point2 q = px(spec.overlay->vertices[0]);
            out << "<circle class=\"locus\" cx=\"" << w.num(q.x()) << "\" cy=\"" << w.num(q.y())
                << "\" r=\"4\" fill=\"none\" stroke=\"#c00000\" stroke-width=\"1.5\"/>\n";
        } else {
            out << "<polygon class=\"locus\" points=\"" << pts
                << "\" fill=\"#c00000\" fill-opacity=\"0.25\" stroke=\"#c00000\" stroke-width=\"1.5\"/>\n";
        }
    }

    for (const Site& s : inst.sites) {
        const ConvexSet& K = s.set;
        switch (K.kind()) {
            case ConvexSet::Kind::Singleton: {
                Point2 q = px(Point2(K.anchor()(0), K.anchor()(1)));
                out << "<circle class=\"site\" cx=\"" << w.num(q.x()) << "\" cy=\"" << w.num(q.y())
                    << "\" r=\"3\" fill=\"black\"/>\n";
                break;
            }
            case ConvexSet::Kind::Polytope: {
                std::vector<Point2> pts;
                for (Eigen::Index k = 0; k < K.points().rows(); ++k) pts.emplace_back(K.points()(k, 0), K.points()(k, 1));
                Polygon hull = make_polygon(pts);
                std::string p;
                for (const Point2& v : hull.vertices) {
                    Point2 q = px(v);
                    p += w.num(q.x()) + "," + w.num(q.y()) + " ";
                }
                p.pop_back();
                out << "<polygon class=\"site\" points=\"" << p
                    << "\" fill=\"black\" fill-opacity=\"0.15\" stroke=\"black\" stroke-width=\"2\"/>\n";
                break;
            }
            case ConvexSet::Kind::Ball: {
                Point2 q = px(Point2(K.center()(0), K.center()(1)));
                double r = K.radius() / (spec.high.x() - spec.low.x()) * W;
                out << "<circle class=\"site\" cx=\"" << w.num(q.x()) << "\" cy=\"" << w.num(q.y()) << "\" r=\""
                    << w.num(r) << "\" fill=\"black\" fill-opacity=\"0.15\" stroke=\"black\" stroke-width=\"2\"/>\n";
                break;
            }
            case ConvexSet::Kind::Flat: {
                const Mat& Q = K.basis();
                Point2 b(K.base()(0), K.base()(1));
                double reach = 2.0 * ((spec.high - spec.low).norm() + (b - spec.low).norm());
                if (Q.cols() >= 2) break;
                Point2 u(Q(0, 0), Q(1, 0));
                Point2 a = px(b - reach * u), c = px(b + reach * u);
                out << "<line class=\"site\" x1=\"" << w.num(a.x()) << "\" y1=\"" << w.num(a.y()) << "\" x2=\""
                    << w.num(c.x()) << "\" y2=\"" << w.num(c.y()) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
                break;
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace ftloc
