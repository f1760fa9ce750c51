#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mmpe {

// 12 significant digits, '.' decimal separator.
std::string format_number(double v);
std::string format_number(long long v);
// RFC-4180 quoting when the field holds a comma, quote, or line break.
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace mmpe
