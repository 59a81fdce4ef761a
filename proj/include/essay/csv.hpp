// csv.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESSAY_CSV_HPP
#define ESSAY_CSV_HPP

#include <istream>
#include <string>
#include <vector>

#include "essay/error.hpp"

namespace essay {

// RFC-4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Tracks the source line of each row start for error reporting.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next_row(std::vector<std::string>& fields, std::size_t& row_start_line) {
    fields.clear();
    int c = in_.peek();
    if (c == EOF) return false;
    row_start_line = line_;
    std::string field;
    bool in_quotes = false;
    bool row_done = false;
    while (!row_done) {
      c = in_.get();
      if (c == EOF) {
        if (in_quotes)
          throw Error("csv",
                      "line " + std::to_string(row_start_line) + ": unterminated quoted field");
        row_done = true;
      } else if (in_quotes) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(static_cast<char>(c));
        }
      } else if (c == '"') {
        in_quotes = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\r') {
        if (in_.peek() == '\n') in_.get();
        ++line_;
        row_done = true;
      } else if (c == '\n') {
        ++line_;
        row_done = true;
      } else {
        field.push_back(static_cast<char>(c));
      }
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace essay

#endif  // ESSAY_CSV_HPP
