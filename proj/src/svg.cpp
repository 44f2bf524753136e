#include "holonomy/svg.hpp"

namespace holonomy::svg {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double strokeWidth, const std::string& dash) {
    body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
          << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt(strokeWidth) << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << "/>\n";
}

void Document::polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                        double strokeWidth) {
    if (pts.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt(strokeWidth) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) body_ << ' ';
        body_ << fmt(pts[i].x) << ',' << fmt(pts[i].y);
    }
    body_ << "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill) {
    body_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
          << "\" fill=\"" << fill << "\"/>\n";
}

void Document::rect(double x, double y, double w, double h, const std::string& fill,
                    const std::string& stroke) {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
          << "\"/>\n";
}

void Document::text(double x, double y, const std::string& content, double size,
                    const std::string& fill) {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << fmt(size)
          << "\" font-family=\"monospace\" fill=\"" << fill << "\">" << content << "</text>\n";
}

void Document::cross_glyph(double cx, double cy, double r, const std::string& stroke) {
    line(cx - r, cy - r, cx + r, cy + r, stroke, 1.4);
    line(cx - r, cy + r, cx + r, cy - r, stroke, 1.4);
}

std::string Document::str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w_) << "\" height=\""
        << fmt(h_) << "\" viewBox=\"0 0 " << fmt(w_) << ' ' << fmt(h_) << "\">\n"
        << "<rect width=\"" << fmt(w_) << "\" height=\"" << fmt(h_) << "\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
}

}  // namespace holonomy::svg
