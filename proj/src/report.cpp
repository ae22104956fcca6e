/*
 * Copyright 2026 The poslens authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "poslens/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "poslens/common.hpp"

namespace poslens::report {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range padded_range(const std::vector<double>& values) {
    Range r;
    if (values.empty()) return r;
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    r.lo = *mn;
    r.hi = *mx;
    if (r.hi == r.lo) {
        r.lo -= 1.0;
        r.hi += 1.0;
    }
    double pad = 0.05 * (r.hi - r.lo);
    r.lo -= pad;
    r.hi += pad;
    return r;
}

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

double map_x(double x, const Range& r) {
    return kMarginLeft + (x - r.lo) / (r.hi - r.lo) *
                             (kWidth - kMarginLeft - kMarginRight);
}

double map_y(double y, const Range& r) {
    return kHeight - kMarginBottom -
           (y - r.lo) / (r.hi - r.lo) * (kHeight - kMarginTop - kMarginBottom);
}

void write_frame(std::ostream& out, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const Range& xr, const Range& yr) {
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
        << kWidth - kMarginLeft - kMarginRight << "\" height=\""
        << kHeight - kMarginTop - kMarginBottom
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-size=\"15\">" << title << "</text>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
        << kHeight / 2 << ")\">" << y_label << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        double px = map_x(fx, xr);
        double py = map_y(fy, yr);
        out << "<line x1=\"" << px << "\" y1=\"" << kHeight - kMarginBottom
            << "\" x2=\"" << px << "\" y2=\"" << kHeight - kMarginBottom + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << kHeight - kMarginBottom + 18
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_g(fx, 4)
            << "</text>\n";
        out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 3
            << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_g(fy, 4)
            << "</text>\n";
    }
}

}  // namespace

void write_tsv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << '\t';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << '\t';
            out << row[i];
        }
        out << '\n';
    }
}

void write_square_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& classes,
                      const std::vector<std::vector<std::string>>& cells) {
    auto out = open_out(path);
    out << "gold\\pred";
    for (const auto& c : classes) out << ',' << c;
    out << '\n';
    for (std::size_t g = 0; g < classes.size(); ++g) {
        out << classes[g];
        for (const auto& cell : cells[g]) out << ',' << cell;
        out << '\n';
    }
}

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& xs, const std::vector<double>& ys) {
    auto out = open_out(path);
    Range xr = padded_range(xs);
    Range yr = padded_range(ys);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\">\n";
    write_frame(out, title, x_label, y_label, xr, yr);
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << fmt_g(map_x(xs[i], xr), 6) << ',' << fmt_g(map_y(ys[i], yr), 6) << ' ';
    out << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << "<circle cx=\"" << fmt_g(map_x(xs[i], xr), 6) << "\" cy=\""
            << fmt_g(map_y(ys[i], yr), 6) << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    out << "</svg>\n";
}

void write_bar_svg(const std::filesystem::path& path, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::vector<double>& values) {
    auto out = open_out(path);
    Range xr{-0.5, static_cast<double>(values.size()) - 0.5};
    std::vector<double> with_zero = values;
    with_zero.push_back(0.0);
    Range yr = padded_range(with_zero);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\">\n";
    write_frame(out, title, x_label, y_label, xr, yr);
    double zero_y = map_y(0.0, yr);
    double slot = (kWidth - kMarginLeft - kMarginRight) /
                  std::max<double>(1.0, static_cast<double>(values.size()));
    double bar = std::max(0.5, slot * 0.8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double cx = map_x(static_cast<double>(i), xr);
        double vy = map_y(values[i], yr);
        double top = std::min(vy, zero_y);
        double height = std::fabs(zero_y - vy);
        out << "<rect x=\"" << fmt_g(cx - bar / 2, 6) << "\" y=\"" << fmt_g(top, 6)
            << "\" width=\"" << fmt_g(bar, 6) << "\" height=\"" << fmt_g(height, 6)
            << "\" fill=\"#1f77b4\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace poslens::report
