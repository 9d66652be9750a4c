/*
 * Copyright 2026 The vlalab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VLALAB_IO_CSV_HPP_
#define VLALAB_IO_CSV_HPP_

#include <string>
#include <vector>

namespace vlalab::io {

// Deterministic fixed-point formatting (no locale, no exponent form).
std::string fmt_fixed(double v, int decimals);

// Minimal CSV emitter: one fixed header, rows of equal width, '\n' line
// endings. Cells are written verbatim; callers must not pass commas.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }
  const std::string& str() const { return body_; }

  // Writes atomically enough for our purposes (truncate + write + flush).
  // Throws MissingArtifact when the path cannot be opened or written.
  void write(const std::string& path) const;

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string body_;
};

// Creates every missing directory on the path. Throws MissingArtifact when
// creation fails.
void ensure_dir(const std::string& dir);

// Writes a whole string to a file (used for SVG and JSON artifacts).
void write_text(const std::string& path, const std::string& text);

// Reads a whole file. Throws MissingArtifact when absent or unreadable.
std::string read_text(const std::string& path);

}  // namespace vlalab::io

#endif  // VLALAB_IO_CSV_HPP_
