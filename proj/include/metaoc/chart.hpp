/*
 Copyright 2026 The metaoc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef METAOC_CHART_HPP
#define METAOC_CHART_HPP

#include <string>
#include <vector>

namespace metaoc {

struct ChartSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

// Minimal SVG line chart, enough for the regret figures.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series);

}  // namespace metaoc

#endif  // METAOC_CHART_HPP
