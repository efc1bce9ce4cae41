#pragma once

#include <istream>
#include <string>
#include <vector>

namespace semibus::csv {

// Minimal comma-separated reader: double-quoted fields with "" escapes,
// no embedded newlines. Blank lines are skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next row into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  int line_number() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

std::vector<std::string> split_line(const std::string& line);
std::string join(const std::vector<std::string>& fields);

// Header lookup helper: index of `name` in `header`, -1 when absent.
int column_index(const std::vector<std::string>& header, const std::string& name);

}  // namespace semibus::csv
