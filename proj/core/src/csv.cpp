#include "revmine/csv.hpp"

#include <istream>
#include <ostream>

namespace revmine::csv {

std::string escape_field(const std::string& field, char delim) {
  bool needs_quotes = field.find_first_of({delim, '"', '\n', '\r'}) != std::string::npos;
  if (!needs_quotes) return field;
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delim) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(delim);
    out << escape_field(fields[i], delim);
  }
  out.put('\n');
}

std::optional<std::vector<std::string>> read_row(std::istream& in, char delim) {
  int first = in.peek();
  if (first == std::istream::traits_type::eof()) return std::nullopt;

  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  int c;
  while ((c = in.get()) != std::istream::traits_type::eof()) {
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else if (ch == '\n') {
      break;
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace revmine::csv
