#include "emit.hpp"

#include <tmlog/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace tmlog::cli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void write_string(std::ostream& os, const std::string& s) {
    // nlohmann's escaping, without its number formatting
    os << Json(s).dump();
}

void write_value(std::ostream& os, const Json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, val] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << pad;
            write_string(os, key);
            os << ": ";
            write_value(os, val, depth + 1);
        }
        os << '\n' << close << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // arrays of scalars stay on one line
        const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
        os << (flat ? "[" : "[\n");
        bool first = true;
        for (const auto& e : j) {
            if (!first) os << (flat ? ", " : ",\n");
            first = false;
            if (!flat) os << pad;
            write_value(os, e, depth + 1);
        }
        if (!flat) os << '\n' << close;
        os << ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        if (std::isfinite(x))
            os << format_double(x);
        else
            write_string(os, format_double(x));
        return;
    }
    case Json::value_t::string:
        write_string(os, j.get<std::string>());
        return;
    default:
        os << j.dump();
        return;
    }
}

std::string csv_cell(const Json& j) {
    if (j.is_null()) return "";
    if (j.is_number_float()) return format_double(j.get<double>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + '"';
    }
    return j.dump();
}

} // namespace

void write_json(std::ostream& os, const Json& j) {
    write_value(os, j, 0);
    os << '\n';
}

void write_csv(std::ostream& os, const Json& j) {
    if (j.contains("rows") && j["rows"].is_array() && !j["rows"].empty()) {
        const auto& rows = j["rows"];
        bool first = true;
        for (const auto& [key, _] : rows.front().items()) {
            os << (first ? "" : ",") << key;
            first = false;
        }
        os << '\n';
        for (const auto& row : rows) {
            first = true;
            for (const auto& [key, _] : rows.front().items()) {
                os << (first ? "" : ",") << (row.contains(key) ? csv_cell(row[key]) : "");
                first = false;
            }
            os << '\n';
        }
        return;
    }
    std::vector<std::string> keys, vals;
    for (const auto& [key, val] : j.items()) {
        if (val.is_structured()) continue;
        keys.push_back(key);
        vals.push_back(csv_cell(val));
    }
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << '\n';
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
    os << '\n';
}

void write_plot(const std::string& prefix, const std::vector<double>& x, const std::vector<double>& y,
                const std::string& x_label, const std::string& y_label) {
    require(x.size() == y.size() && !x.empty(), "plot needs matching, non-empty columns");
    std::ofstream dat(prefix + ".dat");
    require(static_cast<bool>(dat), "cannot write " + prefix + ".dat");
    dat << "# " << x_label << ' ' << y_label << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) dat << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';

    const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    const double xs = *xhi > *xlo ? *xhi - *xlo : 1.0;
    const double ys = *yhi > *ylo ? *yhi - *ylo : 1.0;
    constexpr double W = 640, H = 400, M = 40;
    std::ofstream svg(prefix + ".svg");
    require(static_cast<bool>(svg), "cannot write " + prefix + ".svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double px = M + (W - 2 * M) * (x[i] - *xlo) / xs;
        const double py = H - M - (H - 2 * M) * (y[i] - *ylo) / ys;
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px, py);
        svg << buf;
    }
    svg << "\"/>\n<text x=\"" << M << "\" y=\"" << H - 10 << "\" font-size=\"12\">" << x_label << " in ["
        << format_double(*xlo) << ", " << format_double(*xhi) << "], " << y_label << " in ["
        << format_double(*ylo) << ", " << format_double(*yhi) << "]</text>\n</svg>\n";
}

} // namespace tmlog::cli
