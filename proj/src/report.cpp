#include "imcflab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace imcflab {

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_trace_csv(std::ostream& out, const std::vector<FunctionalRecord>& records)
{
    out << "t,area,A,I,J,L,calK,Q,min_H,lambda_min,umbilicity\n";
    for (const auto& r : records) {
        const double row[] = {r.t, r.area, r.A, r.I, r.J, r.L, r.calK, r.Q, r.min_H, r.lambda_min, r.umbilicity};
        for (std::size_t c = 0; c < std::size(row); ++c)
            out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

namespace {

void emit(std::ostream& out, const nlohmann::ordered_json& v, int depth)
{
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (v.type()) {
    case nlohmann::json::value_t::object: {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            out << (first ? "" : ",\n") << pad << nlohmann::json(it.key()).dump() << ": ";
            emit(out, it.value(), depth + 1);
            first = false;
        }
        out << '\n' << close << '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (v.empty()) {
            out << "[]";
            return;
        }
        out << "[\n";
        for (std::size_t k = 0; k < v.size(); ++k) {
            out << (k ? ",\n" : "") << pad;
            emit(out, v[k], depth + 1);
        }
        out << '\n' << close << ']';
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double x = v.get<double>();
        out << (std::isfinite(x) ? format_number(x) : "null");
        return;
    }
    default:
        out << v.dump();
    }
}

std::string escape_xml(const std::string& s)
{
    std::string r;
    for (char c : s) {
        switch (c) {
        case '<': r += "&lt;"; break;
        case '>': r += "&gt;"; break;
        case '&': r += "&amp;"; break;
        default: r += c;
        }
    }
    return r;
}

} // namespace

void write_json(std::ostream& out, const nlohmann::ordered_json& value)
{
    emit(out, value, 0);
    out << '\n';
}

void write_svg_plot(std::ostream& out, const std::vector<std::pair<double, double>>& points,
                    const std::string& x_label, const std::string& y_label)
{
    constexpr double width = 640, height = 400, left = 80, right = 20, top = 20, bottom = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!points.empty()) {
        const auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                                      [](auto& a, auto& b) { return a.first < b.first; });
        const auto [ymin, ymax] = std::minmax_element(points.begin(), points.end(),
                                                      [](auto& a, auto& b) { return a.second < b.second; });
        x0 = xmin->first;
        x1 = xmax->first;
        y0 = ymin->second;
        y1 = ymax->second;
    }
    if (!(x1 > x0))
        x1 = x0 + 1.0;
    if (!(y1 > y0)) {
        const double pad = std::max(1e-12, std::abs(y0) * 1e-6);
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n";
    char buf[64];
    for (int k = 0; k <= 4; ++k) {
        const double y = y0 + (y1 - y0) * k / 4.0;
        std::snprintf(buf, sizeof buf, "%.6g", y);
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << buf
            << "</text>\n";
        const double x = x0 + (x1 - x0) * k / 4.0;
        std::snprintf(buf, sizeof buf, "%.4g", x);
        out << "<text x=\"" << px(x) << "\" y=\"" << height - bottom + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << buf << "</text>\n";
    }
    out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"13\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 16 " << (top + height - bottom) / 2 << ")\">" << escape_xml(y_label)
        << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < points.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", px(points[k].first), py(points[k].second));
        out << buf;
    }
    out << "\"/>\n</svg>\n";
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    file << content;
    if (!file)
        throw std::runtime_error("write to " + path.string() + " failed");
}

} // namespace imcflab
