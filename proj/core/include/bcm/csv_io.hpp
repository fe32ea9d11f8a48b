#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bcm/gram.hpp"
#include "bcm/grid_measure.hpp"
#include "bcm/point_cloud.hpp"
#include "bcm/simplex.hpp"
#include "bcm/spd.hpp"

namespace bcm {

/// Key-value block prepended to output files as '#' comment lines. Readers
/// skip comments, so the format header stays the first payload line.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  std::string to_block() const;
};

// File formats (one header line, then comma-separated rows):
//   spd,<dim>          d rows of d values, row-major
//   pointcloud,<n>,<d> n rows: weight, then d coordinates
//   gram,<p>           p rows of p values
//   coords,<p>         one row of p values
//   grid,<H>,<W>       H rows of W values

void write_spd_csv(const std::string& path, const SpdMatrix& m,
                   const Metadata* meta = nullptr);
SpdMatrix read_spd_csv(const std::string& path);

void write_pointcloud_csv(const std::string& path, const PointCloud& cloud,
                          const Metadata* meta = nullptr);
PointCloud read_pointcloud_csv(const std::string& path);

void write_gram_csv(const std::string& path, const GramMatrix& m,
                    const Metadata* meta = nullptr);
GramMatrix read_gram_csv(const std::string& path);

void write_coords_csv(const std::string& path, const Coordinates& c,
                      const Metadata* meta = nullptr);
Coordinates read_coords_csv(const std::string& path);

void write_grid_csv(const std::string& path, const GridMeasure& g,
                    const Metadata* meta = nullptr);
GridMeasure read_grid_csv(const std::string& path);

/// Doubles formatted with enough digits to round-trip bit-exactly.
std::string format_double(double v);

}  // namespace bcm
