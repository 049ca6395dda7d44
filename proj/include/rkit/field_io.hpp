#pragma once

#include <string>
#include <vector>

#include "rkit/grid.hpp"

namespace rkit {

// CSV with header "x,value"; spacing must be uniform to 1e-9 h.
Field1D load_field1d_csv(const std::string& path);
Field1D parse_field1d_csv(const std::string& text);
// CSV with header "x,y,value", x varying fastest; the point set must be a full rectangle.
Field2D load_field2d_csv(const std::string& path);
Field2D parse_field2d_csv(const std::string& text);

std::string format_field_csv(const Field1D& u);
std::string format_field_csv(const Field2D& u);

// 17 significant digits: parses back to the identical double.
std::string format_real(double x);

// Writes to path.tmp.<pid> and renames over path.
void write_file_atomic(const std::string& path, const std::string& content);
void save_field_csv(const std::string& path, const Field1D& u);
void save_field_csv(const std::string& path, const Field2D& u);

// Header-only plot table: columns then rows, all reals at 17 digits.
void emit_plot_data(const std::string& path, const std::vector<std::string>& columns,
                    const std::vector<std::vector<double>>& rows);

}  // namespace rkit
