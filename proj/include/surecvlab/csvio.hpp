#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include "surecvlab/common.hpp"

namespace surecv {

/// Full-precision (%.17g equivalent), locale-independent number formatting.
inline std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Minimal CSV emitter: header row plus rows of preformatted cells.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& cols) { line(cols); }

  void row(const std::vector<std::string>& cells) { line(cells); }

private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::ostream& out_;
};

}  // namespace surecv
