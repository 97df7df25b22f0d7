#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace tmlog::cli {

using Json = nlohmann::ordered_json;

// Insertion-ordered JSON with every double printed as %.17g, so identical
// inputs give byte-identical output. Non-finite doubles become the strings
// "inf", "-inf" and "nan".
void write_json(std::ostream& os, const Json& j);

// A report holding a "rows" array prints one CSV line per row, headed by the
// first row's keys. Anything else prints its scalar top-level fields as a
// header line and a value line.
void write_csv(std::ostream& os, const Json& j);

std::string format_double(double x);

// Writes prefix.dat (two whitespace-separated columns) and prefix.svg (one
// polyline on a 640x400 canvas with the data ranges in a caption).
void write_plot(const std::string& prefix, const std::vector<double>& x, const std::vector<double>& y,
                const std::string& x_label, const std::string& y_label);

} // namespace tmlog::cli
