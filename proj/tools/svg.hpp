#pragma once

// Minimal SVG emitter for the plot subcommand. Plots are diagnostic
// artifacts; every numeric value drawn here is also written to a CSV next
// to the SVG so downstream checks never have to touch markup.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mad/error.hpp"

namespace madtool {

class SvgCanvas {
public:
    SvgCanvas(double width, double height) : width_(width), height_(height) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
              << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width << "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, int size = 10,
              const std::string& anchor = "start") {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << escape(s)
              << "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << x << "," << y << " ";
        body_ << "\"/>\n";
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) mad::fail(mad::errc::io_error, "cannot open for writing: " + path.string());
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
            << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
        if (!out) mad::fail(mad::errc::io_error, "short write: " + path.string());
    }

private:
    static std::string escape(const std::string& s) {
        std::string out;
        for (char ch : s) {
            switch (ch) {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                default: out.push_back(ch);
            }
        }
        return out;
    }

    double width_;
    double height_;
    std::ostringstream body_;
};

} // namespace madtool
