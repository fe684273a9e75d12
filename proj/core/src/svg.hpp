#pragma once

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace rftwin::svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Minimal standalone SVG document builder.
class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& extra = {}) {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
          << "\" fill=\"" << fill << "\" " << extra << "/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& dash = {}) {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << "/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.5) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\" points=\"";
    for (const auto& [x, y] : pts) body_ << num(x) << ',' << num(y) << ' ';
    body_ << "\"/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke = "none") {
    body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" fill=\"" << fill
          << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void text(double x, double y, const std::string& content, double size = 12, const std::string& anchor = "start") {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\" font-size=\""
          << num(size) << "\" text-anchor=\"" << anchor << "\">" << escape(content) << "</text>\n";
  }
  void raw(const std::string& s) { body_ << s; }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
        << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

/// Maps data coordinates into a plotting rectangle (y grows upward).
struct Frame {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

inline void axes(Document& doc, const Frame& f, const std::string& x_label, const std::string& y_label,
                 int x_ticks = 5, int y_ticks = 5) {
  doc.rect(f.left, f.top, f.width, f.height, "none", "stroke=\"black\"");
  for (int i = 0; i <= x_ticks; ++i) {
    const double v = f.x_min + (f.x_max - f.x_min) * i / x_ticks;
    const double x = f.px(v);
    doc.line(x, f.top + f.height, x, f.top + f.height + 4, "black");
    doc.text(x, f.top + f.height + 16, num(v), 10, "middle");
  }
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = f.y_min + (f.y_max - f.y_min) * i / y_ticks;
    const double y = f.py(v);
    doc.line(f.left - 4, y, f.left, y, "black");
    doc.text(f.left - 6, y + 3, num(v), 10, "end");
  }
  doc.text(f.left + f.width / 2, f.top + f.height + 32, x_label, 12, "middle");
  doc.raw("<text transform=\"translate(" + num(f.left - 40) + "," + num(f.top + f.height / 2) +
          ") rotate(-90)\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" + escape(y_label) +
          "</text>\n");
}

void write_file(const std::filesystem::path& path, const Document& doc);

}  // namespace rftwin::svg
