#include "nodalsplit/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <unordered_map>

#include "nodalsplit/hadamard.hpp"
#include "nodalsplit/modes.hpp"

namespace nodalsplit {

namespace {

constexpr double kPi = std::numbers::pi;

// global edge ids: vertical edge at (ix, iy)-(ix, iy+1), horizontal at
// (ix, iy)-(ix+1, iy)
int64_t vedge(int ix, int iy, int ny) { return (static_cast<int64_t>(ix) * (ny + 1) + iy) * 2; }
int64_t hedge(int ix, int iy, int ny) { return (static_cast<int64_t>(ix) * (ny + 1) + iy) * 2 + 1; }

struct Crossing {
    double x, y;
    int deg = 0;
    std::array<int64_t, 2> nbr{-1, -1};
};

} // namespace

std::vector<NodalCurve> marching_squares(const Field2D& field, double iso) {
    const GridSpec& g = field.grid;
    const double hx = g.hx(), hy = g.hy();
    std::unordered_map<int64_t, Crossing> pts;
    auto cross_point = [&](int64_t id, bool vertical, int ix, int iy, double va, double vb) {
        auto it = pts.find(id);
        if (it != pts.end()) return;
        const double t = (iso - va) / (vb - va);
        Crossing c;
        c.x = vertical ? ix * hx : (ix + t) * hx;
        c.y = vertical ? (iy + t) * hy : iy * hy;
        pts.emplace(id, c);
    };
    auto link = [&](int64_t a, int64_t b) {
        auto& ca = pts[a];
        auto& cb = pts[b];
        ca.nbr[static_cast<size_t>(ca.deg++)] = b;
        cb.nbr[static_cast<size_t>(cb.deg++)] = a;
    };

    // interior cells only: all four corners are interior nodes
    for (int ix = 1; ix <= g.nx - 2; ++ix) {
        for (int iy = 1; iy <= g.ny - 2; ++iy) {
            const double v00 = field.at(ix, iy), v10 = field.at(ix + 1, iy);
            const double v01 = field.at(ix, iy + 1), v11 = field.at(ix + 1, iy + 1);
            const bool s00 = v00 > iso, s10 = v10 > iso, s01 = v01 > iso, s11 = v11 > iso;
            const int npos = s00 + s10 + s01 + s11;
            if (npos == 0 || npos == 4) continue;

            const int64_t bot = hedge(ix, iy, g.ny), top = hedge(ix, iy + 1, g.ny);
            const int64_t lef = vedge(ix, iy, g.ny), rig = vedge(ix + 1, iy, g.ny);
            if (s00 != s10) cross_point(bot, false, ix, iy, v00, v10);
            if (s01 != s11) cross_point(top, false, ix, iy + 1, v01, v11);
            if (s00 != s01) cross_point(lef, true, ix, iy, v00, v01);
            if (s10 != s11) cross_point(rig, true, ix + 1, iy, v10, v11);

            if (npos == 2 && s00 == s11 && s10 == s01) {
                // saddle: pair by the sign of the cell-center average
                const double center = 0.25 * (v00 + v10 + v01 + v11);
                if ((center > iso) == s00) {
                    link(bot, rig);  // s00-corner region spans the diagonal
                    link(top, lef);
                } else {
                    link(bot, lef);
                    link(top, rig);
                }
            } else {
                std::array<int64_t, 4> crossed{};
                int nc = 0;
                if (s00 != s10) crossed[static_cast<size_t>(nc++)] = bot;
                if (s10 != s11) crossed[static_cast<size_t>(nc++)] = rig;
                if (s01 != s11) crossed[static_cast<size_t>(nc++)] = top;
                if (s00 != s01) crossed[static_cast<size_t>(nc++)] = lef;
                if (nc == 2) link(crossed[0], crossed[1]);
            }
        }
    }

    auto side_of = [&](int64_t id) {
        const bool horizontal = id & 1;
        const int64_t cell = id >> 1;
        const int ix = static_cast<int>(cell / (g.ny + 1));
        const int iy = static_cast<int>(cell % (g.ny + 1));
        if (horizontal) {
            if (iy == 1) return BoundarySide::bottom;
            if (iy == g.ny - 1) return BoundarySide::top;
        } else {
            if (ix == 1) return BoundarySide::left;
            if (ix == g.nx - 1) return BoundarySide::right;
        }
        return BoundarySide::none;
    };

    std::vector<NodalCurve> curves;
    std::unordered_map<int64_t, bool> used;
    auto walk = [&](int64_t start) {
        NodalCurve curve;
        curve.start_side = side_of(start);
        int64_t prev = -1, cur = start;
        while (true) {
            used[cur] = true;
            const Crossing& c = pts[cur];
            curve.points.push_back({c.x, c.y});
            int64_t next = -1;
            for (int q = 0; q < c.deg; ++q)
                if (c.nbr[static_cast<size_t>(q)] != prev) next = c.nbr[static_cast<size_t>(q)];
            if (next == -1 || next == start) {
                curve.closed = (next == start);
                curve.end_side = curve.closed ? BoundarySide::none : side_of(cur);
                break;
            }
            prev = cur;
            cur = next;
        }
        return curve;
    };

    for (auto& [id, c] : pts)
        if (c.deg == 1 && !used[id]) curves.push_back(walk(id));
    for (auto& [id, c] : pts)
        if (c.deg == 2 && !used[id]) curves.push_back(walk(id));
    // drop stray single-point fragments (isolated crossings with no segment)
    std::erase_if(curves, [](const NodalCurve& c) { return c.points.size() < 2; });
    return curves;
}

int count_domains(const Field2D& field) {
    const GridSpec& g = field.grid;
    const double thr = 1e-12 * field.max_abs();
    const int W = g.nx - 1, H = g.ny - 1;
    std::vector<int8_t> sgn(static_cast<size_t>(W) * H, 0);
    for (int ix = 1; ix < g.nx; ++ix)
        for (int iy = 1; iy < g.ny; ++iy) {
            const double v = field.at(ix, iy);
            sgn[static_cast<size_t>(ix - 1) * H + (iy - 1)] = v > thr ? 1 : (v < -thr ? -1 : 0);
        }
    std::vector<int32_t> label(static_cast<size_t>(W) * H, 0);
    int count = 0;
    std::deque<int> queue;
    for (int start = 0; start < W * H; ++start) {
        if (sgn[static_cast<size_t>(start)] == 0 || label[static_cast<size_t>(start)] != 0) continue;
        ++count;
        const int8_t s = sgn[static_cast<size_t>(start)];
        label[static_cast<size_t>(start)] = count;
        queue.push_back(start);
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            const int px = p / H, py = p % H;
            const std::array<int, 4> nb = {px > 0 ? p - H : -1, px < W - 1 ? p + H : -1,
                                           py > 0 ? p - 1 : -1, py < H - 1 ? p + 1 : -1};
            for (int q : nb) {
                if (q < 0) continue;
                if (sgn[static_cast<size_t>(q)] == s && label[static_cast<size_t>(q)] == 0) {
                    label[static_cast<size_t>(q)] = count;
                    queue.push_back(q);
                }
            }
        }
    }
    // near-zero nodes are absorbed by whichever neighbors exist; they never
    // bridge two regions, so the component count is unaffected
    return count;
}

HyperbolaFit solve_model(const ModelPolynomial& poly, double x_ref, double y_ref) {
    if (poly.alpha == 0.0) throw DegenerateModelError("alpha = 0: no bilinear term");
    HyperbolaFit fit;
    fit.poly = poly;
    fit.x_ref = x_ref;
    fit.y_ref = y_ref;
    fit.center_x = x_ref - poly.upsilon / poly.alpha;
    fit.center_y = y_ref - poly.beta / poly.alpha;
    fit.d_const = (poly.beta * poly.upsilon - poly.rho * poly.alpha) / (poly.alpha * poly.alpha);
    if (fit.d_const == 0.0) throw DegenerateModelError("beta*upsilon - rho*alpha = 0");
    fit.gap = std::sqrt(8.0 * std::abs(fit.d_const));
    fit.angle_sign = poly.rho > 0.0 ? 1 : (poly.rho < 0.0 ? -1 : 0);
    return fit;
}

namespace {

// full {cos, sin} fit of a mode profile over x in [0.1N, 0.9N]
std::pair<double, double> fit_mode_pair(const ModeProfile& m, const GridSpec& g) {
    double scc = 0, scs = 0, sss = 0, bc = 0, bs = 0;
    for (int ix = 0; ix <= g.nx; ++ix) {
        const double x = ix * g.hx();
        if (x < 0.1 * g.N || x > 0.9 * g.N) continue;
        const double c = std::cos(m.mu_j * x), s = std::sin(m.mu_j * x);
        scc += c * c; scs += c * s; sss += s * s;
        bc += c * m.values[static_cast<size_t>(ix)];
        bs += s * m.values[static_cast<size_t>(ix)];
    }
    const double det = scc * sss - scs * scs;
    if (std::abs(det) < 1e-12 * (scc + sss) * (scc + sss))
        throw FitError("degenerate mode fit");
    return {(bc * sss - bs * scs) / det, (bs * scc - bc * scs) / det};
}

} // namespace

HyperbolaFit fit_hyperbola(const Field2D& field, const DomainSpec& spec, double c1, double c2,
                           double branch_value) {
    if (spec.k % 2 != 0) throw ParityError("hyperbola fit requires even k");
    if (!(spec.eta > 0.0)) throw std::invalid_argument("hyperbola fit requires eta > 0");
    const GridSpec& g = field.grid;
    const double N = spec.N;
    const double ybar = crossing_height(spec, c1, c2);
    const double r = 2.0 * std::pow(spec.eta, 0.4);
    if (N / 2 - r <= 0 || N / 2 + r >= N || ybar - r <= 0 || ybar + r >= 1)
        throw std::invalid_argument("fit disc of radius 2 eta^0.4 leaves the domain");

    const double ck = (spec.k % 4 == 0) ? 1.0 : -1.0;
    const double alpha = 2.0 * kPi * kPi / (N * std::sqrt(N)) *
                         (spec.k * c1 * ck * std::cos(kPi * ybar) -
                          4.0 * c2 * std::cos(2.0 * kPi * ybar));
    ModelPolynomial poly;
    poly.alpha = alpha;
    poly.rho = field.interp(N / 2, ybar);

    auto modes = extract_modes(field, branch_value, 2);
    const auto [p1, q1] = fit_mode_pair(modes[0], g);
    const auto [p2, q2] = fit_mode_pair(modes[1], g);
    const double mu1 = modes[0].mu_j, mu2 = modes[1].mu_j;
    auto recon = [&](double x, double y) {
        return (p1 * std::cos(mu1 * x) + q1 * std::sin(mu1 * x)) * std::sin(kPi * y) +
               (p2 * std::cos(mu2 * x) + q2 * std::sin(mu2 * x)) * std::sin(2.0 * kPi * y);
    };
    const double step = 1e-5 * N;
    poly.beta = (recon(N / 2 + step, ybar) - recon(N / 2 - step, ybar)) / (2.0 * step);
    poly.upsilon = (recon(N / 2, ybar + step) - recon(N / 2, ybar - step)) / (2.0 * step);

    HyperbolaFit fit = solve_model(poly, N / 2, ybar);
    fit.geometry_resolved = fit.gap > 4.0 * std::max(g.hx(), g.hy());
    // interpolation-noise floor for the d constant; rho enters bilinearly so
    // only the local second derivatives (size ~ lambda |rho|) contribute
    const double noise_d = branch_value * std::abs(poly.rho) *
                           (g.hx() * g.hx() + g.hy() * g.hy()) / (4.0 * std::abs(alpha));
    if (std::abs(fit.d_const) <= 4.0 * noise_d)
        throw GapUnresolvableError("vertex gap below the interpolation noise floor");
    return fit;
}

double curve_gap(const std::vector<NodalCurve>& curves, const Region& region) {
    std::vector<std::array<double, 3>> pts;  // x, y, curve id
    for (size_t ci = 0; ci < curves.size(); ++ci)
        for (const auto& p : curves[ci].points)
            if (region.contains(p[0], p[1]))
                pts.push_back({p[0], p[1], static_cast<double>(ci)});
    int ncurves = 0;
    {
        std::vector<bool> seen(curves.size(), false);
        for (const auto& p : pts) {
            if (!seen[static_cast<size_t>(p[2])]) { seen[static_cast<size_t>(p[2])] = true; ++ncurves; }
        }
    }
    if (ncurves < 2) throw InsufficientCurvesError("fewer than 2 curves intersect the region");

    // uniform spatial hash; ring search outward from each point
    const double sx = region.xmax - region.xmin, sy = region.ymax - region.ymin;
    const double cell = std::max(1e-12, std::sqrt(std::max(sx * sy, 1e-12) / (pts.size() + 1.0)));
    const int gx = std::max(1, static_cast<int>(sx / cell) + 1);
    const int gy = std::max(1, static_cast<int>(sy / cell) + 1);
    std::unordered_map<int64_t, std::vector<int>> hash;
    auto cell_of = [&](double x, double y) {
        int cx = std::clamp(static_cast<int>((x - region.xmin) / cell), 0, gx - 1);
        int cy = std::clamp(static_cast<int>((y - region.ymin) / cell), 0, gy - 1);
        return std::pair<int, int>{cx, cy};
    };
    for (size_t i = 0; i < pts.size(); ++i) {
        auto [cx, cy] = cell_of(pts[i][0], pts[i][1]);
        hash[static_cast<int64_t>(cx) * gy + cy].push_back(static_cast<int>(i));
    }
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i) {
        auto [cx, cy] = cell_of(pts[i][0], pts[i][1]);
        const int max_ring = std::max(gx, gy);
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (ring > 1 && (ring - 1) * cell > best) break;
            for (int dx = -ring; dx <= ring; ++dx) {
                for (int dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const int nxc = cx + dx, nyc = cy + dy;
                    if (nxc < 0 || nxc >= gx || nyc < 0 || nyc >= gy) continue;
                    auto it = hash.find(static_cast<int64_t>(nxc) * gy + nyc);
                    if (it == hash.end()) continue;
                    for (int jj : it->second) {
                        const size_t j = static_cast<size_t>(jj);
                        if (pts[j][2] == pts[i][2]) continue;
                        best = std::min(best, std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]));
                    }
                }
            }
        }
    }
    return best;
}

namespace {

std::array<double, 2> pca_direction(const std::vector<std::array<double, 2>>& pts) {
    double mx = 0, my = 0;
    for (const auto& p : pts) { mx += p[0]; my += p[1]; }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : pts) {
        sxx += (p[0] - mx) * (p[0] - mx);
        sxy += (p[0] - mx) * (p[1] - my);
        syy += (p[1] - my) * (p[1] - my);
    }
    const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
    const double l = 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
    std::array<double, 2> d = (std::abs(sxy) > 1e-300) ? std::array<double, 2>{l - syy, sxy}
                              : (sxx >= syy ? std::array<double, 2>{1.0, 0.0}
                                            : std::array<double, 2>{0.0, 1.0});
    const double n = std::hypot(d[0], d[1]);
    return {d[0] / n, d[1] / n};
}

} // namespace

std::vector<BoundaryAngle> boundary_angles(const std::vector<NodalCurve>& curves,
                                           const DomainSpec& spec, const BoundaryFn& phi,
                                           const GridSpec& grid) {
    std::vector<BoundaryAngle> out;
    for (const auto& curve : curves) {
        if (curve.closed) continue;
        for (int endsel = 0; endsel < 2; ++endsel) {
            const BoundarySide side = endsel == 0 ? curve.start_side : curve.end_side;
            if (side == BoundarySide::none) continue;
            const size_t n = curve.points.size();
            const size_t take = std::min<size_t>(8, n);
            std::vector<std::array<double, 2>> tail;
            if (endsel == 0)
                tail.assign(curve.points.begin(), curve.points.begin() + static_cast<long>(take));
            else
                tail.assign(curve.points.end() - static_cast<long>(take), curve.points.end());
            BoundaryAngle a;
            a.side = side;
            a.short_fit = take < 8;
            if (tail.size() < 2) continue;
            auto dir = pca_direction(tail);
            const auto& tip = endsel == 0 ? curve.points.front() : curve.points.back();
            // extend the fitted line from the tip to the boundary
            double t = 0.0;
            switch (side) {
                case BoundarySide::left:   t = (0.0 - tip[0]) / (dir[0] != 0 ? dir[0] : 1e-300); break;
                case BoundarySide::right:  t = (grid.N - tip[0]) / (dir[0] != 0 ? dir[0] : 1e-300); break;
                case BoundarySide::bottom: t = (0.0 - tip[1]) / (dir[1] != 0 ? dir[1] : 1e-300); break;
                case BoundarySide::top:    t = (1.0 - tip[1]) / (dir[1] != 0 ? dir[1] : 1e-300); break;
                default: break;
            }
            a.x = tip[0] + t * dir[0];
            a.y = tip[1] + t * dir[1];

            double cx = dir[0], cy = dir[1];  // curve tangent
            double bx, by;                    // boundary tangent
            if (side == BoundarySide::left) {
                // physical coordinates: x_phys = (x_ref/N)(N + eta phi) - eta phi
                const double fp = phi.eval(std::clamp(a.y, 0.0, 1.0), 1);
                const double f0 = phi.eval(std::clamp(a.y, 0.0, 1.0));
                cx = cx * (spec.N + spec.eta * f0) / spec.N - cy * spec.eta * fp;
                bx = -spec.eta * fp;
                by = 1.0;
            } else if (side == BoundarySide::right) {
                bx = 0.0; by = 1.0;
            } else {
                bx = 1.0; by = 0.0;
            }
            const double dot = std::abs(cx * bx + cy * by) /
                               (std::hypot(cx, cy) * std::hypot(bx, by));
            a.angle_deg = std::acos(std::clamp(dot, 0.0, 1.0)) * 180.0 / kPi;
            out.push_back(a);
        }
    }
    return out;
}

GraphDeviation graph_deviation(const std::vector<NodalCurve>& curves,
                               const std::function<std::optional<double>(double)>& reference,
                               const Region& window, GraphAxis axis) {
    std::vector<std::array<double, 2>> pts;  // (independent, dependent)
    int ncurves = 0;
    for (const auto& curve : curves) {
        bool any = false;
        for (const auto& p : curve.points) {
            if (!window.contains(p[0], p[1])) continue;
            any = true;
            if (axis == GraphAxis::y_of_x) pts.push_back({p[0], p[1]});
            else pts.push_back({p[1], p[0]});
        }
        if (any) ++ncurves;
    }
    if (ncurves != 1)
        throw ParametrizationError("expected exactly one curve in the window, found " +
                                   std::to_string(ncurves));
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    GraphDeviation dev;
    const double span = pts.back()[0] - pts.front()[0];
    const double h_ref = std::max(span / 1000.0, 1e-9);
    std::optional<double> prev_t, prev_v;
    for (const auto& p : pts) {
        const auto ref = reference(p[0]);
        if (ref) dev.sup_gap = std::max(dev.sup_gap, std::abs(p[1] - *ref));
        if (prev_t && p[0] - *prev_t > 1e-12) {
            const double slope = (p[1] - *prev_v) / (p[0] - *prev_t);
            const double tm = 0.5 * (p[0] + *prev_t);
            const auto rp = reference(tm + h_ref), rm = reference(tm - h_ref);
            if (rp && rm) {
                const double ref_slope = (*rp - *rm) / (2.0 * h_ref);
                dev.sup_slope_gap = std::max(dev.sup_slope_gap, std::abs(slope - ref_slope));
            }
        }
        prev_t = p[0];
        prev_v = p[1];
    }
    return dev;
}

bool crossing_detected(const Field2D& field, double x0, double y0) {
    return std::abs(field.interp(x0, y0)) <= 1e-9 * field.max_abs();
}

NodalDecomposition decompose(const Field2D& field, const DomainSpec& spec, double c1, double c2,
                             double branch_value, bool upper_branch) {
    NodalDecomposition d;
    d.curves = marching_squares(field);
    d.domain_count = count_domains(field);
    if (spec.k % 2 == 0 && upper_branch) {
        const double ybar = crossing_height(spec, c1, c2);
        d.crossing = crossing_detected(field, spec.N / 2, ybar);
        if (spec.eta > 0.0) {
            try {
                d.hyperbola = fit_hyperbola(field, spec, c1, c2, branch_value);
                d.gap = d.hyperbola->gap;
            } catch (const GapUnresolvableError&) {
            } catch (const DegenerateModelError&) {
            }
        }
    }
    return d;
}

} // namespace nodalsplit
