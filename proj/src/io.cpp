#include "nodalsplit/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace nodalsplit {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (std::strcmp(buf, "-0") == 0) return "0";
    return buf;
}

namespace {

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

void write_nodal_svg(const std::string& path, const DomainSpec& spec, const BoundaryFn& phi,
                     const std::vector<NodalCurve>& curves,
                     const std::optional<HyperbolaFit>& hyperbola, const std::string& title) {
    const double N = spec.N, eta = spec.eta;
    const double scale = 240.0;  // px per unit length
    const double margin = 20.0;
    const double xmin = -eta * 1.2;  // room for the bulged left side
    const double w = (N - xmin) * scale + 2 * margin;
    const double h = scale + 2 * margin;
    auto X = [&](double x) { return margin + (x - xmin) * scale; };
    auto Y = [&](double y) { return margin + (1.0 - y) * scale; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(w) << "\" height=\""
        << svg_num(h) << "\" viewBox=\"0 0 " << svg_num(w) << " " << svg_num(h) << "\">\n";
    out << "<title>" << title << "</title>\n";

    // domain outline: bottom, right, top straight; left is -eta phi(y)
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"M " << svg_num(X(0))
        << " " << svg_num(Y(0));
    out << " L " << svg_num(X(N)) << " " << svg_num(Y(0));
    out << " L " << svg_num(X(N)) << " " << svg_num(Y(1));
    out << " L " << svg_num(X(0)) << " " << svg_num(Y(1));
    const int nb = 64;
    for (int i = 1; i <= nb; ++i) {
        const double y = 1.0 - static_cast<double>(i) / nb;
        out << " L " << svg_num(X(-eta * phi.eval(y))) << " " << svg_num(Y(y));
    }
    out << " Z\"/>\n";

    for (const auto& curve : curves) {
        if (curve.points.size() < 2) continue;
        out << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.2\" points=\"";
        for (const auto& p : curve.points) {
            const double xp = physical_x(spec, phi.eval(p[1]), p[0]);
            out << svg_num(X(xp)) << "," << svg_num(Y(p[1])) << " ";
        }
        out << "\"/>\n";
    }

    if (hyperbola) {
        const auto& fit = *hyperbola;
        const double r = 2.0 * std::pow(std::max(eta, 1e-12), 0.4);
        for (int side = -1; side <= 1; side += 2) {
            out << "<polyline fill=\"none\" stroke=\"#bf3f1f\" stroke-dasharray=\"4 3\" "
                   "stroke-width=\"1\" points=\"";
            const int ns = 48;
            for (int i = 0; i <= ns; ++i) {
                // parametrize (x - xc)(y - yc) = d by the x offset
                const double lo = std::sqrt(std::abs(fit.d_const)) * 0.6;
                const double dx = side * (lo + (r - lo) * i / ns);
                const double x = fit.center_x + dx;
                const double y = fit.center_y + fit.d_const / dx;
                if (std::abs(y - fit.y_ref) > r) continue;
                const double xp = physical_x(spec, phi.eval(y), x);
                out << svg_num(X(xp)) << "," << svg_num(Y(y)) << " ";
            }
            out << "\"/>\n";
        }
    }
    out << "</svg>\n";
}

void write_field_dump(const std::string& path, const Field2D& field, int k, double eta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    char header[32] = {};
    std::memcpy(header, "NSPL", 4);
    const uint32_t version = 1;
    const uint32_t nx = static_cast<uint32_t>(field.grid.nx);
    const uint32_t ny = static_cast<uint32_t>(field.grid.ny);
    const uint32_t ku = static_cast<uint32_t>(k);
    std::memcpy(header + 4, &version, 4);
    std::memcpy(header + 8, &nx, 4);
    std::memcpy(header + 12, &ny, 4);
    std::memcpy(header + 16, &ku, 4);
    std::memcpy(header + 24, &eta, 8);
    out.write(header, 32);
    // rows of constant y, x fastest
    for (int iy = 0; iy <= field.grid.ny; ++iy)
        for (int ix = 0; ix <= field.grid.nx; ++ix) {
            const double v = field.at(ix, iy);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

Field2D read_field_dump(const std::string& path, int* k_out, double* eta_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    char header[32];
    in.read(header, 32);
    if (!in || std::memcmp(header, "NSPL", 4) != 0)
        throw std::runtime_error(path + " is not a field dump");
    uint32_t version, nx, ny, ku;
    double eta;
    std::memcpy(&version, header + 4, 4);
    std::memcpy(&nx, header + 8, 4);
    std::memcpy(&ny, header + 12, 4);
    std::memcpy(&ku, header + 16, 4);
    std::memcpy(&eta, header + 24, 8);
    if (version != 1) throw std::runtime_error("unsupported field dump version");
    GridSpec g;
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    g.N = aspect_from_k(static_cast<int>(ku));
    Field2D f(g);
    for (int iy = 0; iy <= g.ny; ++iy)
        for (int ix = 0; ix <= g.nx; ++ix) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            f.at(ix, iy) = v;
        }
    if (!in) throw std::runtime_error("truncated field dump " + path);
    if (k_out) *k_out = static_cast<int>(ku);
    if (eta_out) *eta_out = eta;
    return f;
}

} // namespace nodalsplit
