#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "holonomy/geom.hpp"

namespace holonomy::svg {

// Minimal deterministic SVG writer: fixed number formatting, no timestamps,
// elements emitted in call order.
class Document {
  public:
    Document(double width, double height) : w_(width), h_(height) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double strokeWidth = 1.0, const std::string& dash = "");
    void polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                  double strokeWidth = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill);
    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none");
    void text(double x, double y, const std::string& content, double size = 10.0,
              const std::string& fill = "#333333");
    void cross_glyph(double cx, double cy, double r, const std::string& stroke);

    std::string str() const;

  private:
    double w_, h_;
    std::ostringstream body_;
};

std::string fmt(double v);

}  // namespace holonomy::svg
