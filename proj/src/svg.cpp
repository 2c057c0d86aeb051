#include "stokeskit/svg.hpp"

#include <cmath>
#include <cstdio>

namespace stokeskit {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8f", v);
    return buf;
}

} // namespace

std::string render_svg(const std::vector<StokesCurve>& curves,
                       const std::vector<Direction>& lines, double disc_radius) {
    double r = disc_radius;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + fmt(-r) +
           " " + fmt(-r) + " " + fmt(2 * r) + " " + fmt(2 * r) + "\">\n";
    out += "  <circle cx=\"0\" cy=\"0\" r=\"" + fmt(r) +
           "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"" + fmt(r / 400) + "\"/>\n";
    for (const auto& l : lines) {
        double x = r * std::cos(l.radians), y = -r * std::sin(l.radians);
        out += "  <line class=\"stokes-line\" x1=\"0\" y1=\"0\" x2=\"" + fmt(x) + "\" y2=\"" +
               fmt(y) + "\" stroke=\"#d62728\" stroke-width=\"" + fmt(r / 300) +
               "\" stroke-dasharray=\"" + fmt(r / 40) + " " + fmt(r / 80) + "\"/>\n";
    }
    for (const auto& c : curves) {
        out += "  <polyline class=\"stokes-curve\" fill=\"none\" stroke=\"#1f77b4\" "
               "stroke-width=\"" +
               fmt(r / 250) + "\" points=\"";
        bool first = true;
        for (const auto& p : c.points) {
            if (!first) out += " ";
            out += fmt(p.rho * std::cos(p.theta)) + "," + fmt(-p.rho * std::sin(p.theta));
            first = false;
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace stokeskit
