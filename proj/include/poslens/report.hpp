/*
 * Copyright 2026 The poslens authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace poslens::report {

/// UTF-8 TSV with a single header row.
void write_tsv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Square CSV: first row/column carry the class names.
void write_square_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& classes,
                      const std::vector<std::vector<std::string>>& cells);

/// Single-series line plot with axes and tick labels.
void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& xs, const std::vector<double>& ys);

/// Bar plot over 0..n-1 (component index on the x axis).
void write_bar_svg(const std::filesystem::path& path, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::vector<double>& values);

}  // namespace poslens::report
