#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace revmine::csv {

// RFC 4180 style: fields containing the delimiter, a quote or a newline are
// wrapped in double quotes, embedded quotes doubled. UTF-8 passes through
// untouched.
std::string escape_field(const std::string& field, char delim = ',');

void write_row(std::ostream& out, const std::vector<std::string>& fields,
               char delim = ',');

// Reads one logical row (quoted fields may span physical lines).
// Returns nullopt at end of input.
std::optional<std::vector<std::string>> read_row(std::istream& in,
                                                 char delim = ',');

}  // namespace revmine::csv
