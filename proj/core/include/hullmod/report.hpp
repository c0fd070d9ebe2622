#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hullmod {

/// Shortest round-tripping decimal form of a double.
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Row length must match the header.
  void add_row(std::vector<std::string> row);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line plot; log axes drop nonpositive points.
void write_svg_plot(const std::string& path, const std::string& title, const std::vector<PlotSeries>& series,
                    bool log_x, bool log_y);

}  // namespace hullmod
