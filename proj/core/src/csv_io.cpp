#include "bcm/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bcm/error.hpp"

namespace bcm {

void Metadata::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

std::string Metadata::to_block() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries) out << "# " << k << " = " << v << "\n";
  return out.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

// Lines of the file with '#' comments and blank lines removed.
std::vector<std::string> payload_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError(path + ": no payload lines");
  return lines;
}

long parse_count(const std::string& s, const std::string& path) {
  try {
    return std::stol(s);
  } catch (const std::exception&) {
    throw ValidationError(path + ": bad count '" + s + "' in header");
  }
}

double parse_value(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(path + ": bad numeric field '" + s + "'");
  }
}

Eigen::MatrixXd read_matrix_rows(const std::vector<std::string>& lines, long rows, long cols,
                                 const std::string& path) {
  if (static_cast<long>(lines.size()) != rows + 1) {
    throw ValidationError(path + ": expected " + std::to_string(rows) + " data rows, found " +
                          std::to_string(lines.size() - 1));
  }
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const auto fields = split_csv_line(lines[static_cast<std::size_t>(i + 1)]);
    if (static_cast<long>(fields.size()) != cols) {
      throw ValidationError(path + ": row " + std::to_string(i) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(cols));
    }
    for (long j = 0; j < cols; ++j) m(i, j) = parse_value(fields[static_cast<std::size_t>(j)], path);
  }
  return m;
}

std::ofstream open_out(const std::string& path, const Metadata* meta) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  if (meta) out << meta->to_block();
  return out;
}

void write_matrix_rows(std::ofstream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::vector<std::string> expect_header(const std::string& path, const std::string& tag,
                                       std::size_t counts, std::vector<std::string>& lines_out) {
  lines_out = payload_lines(path);
  const auto fields = split_csv_line(lines_out.front());
  if (fields.size() != counts + 1 || fields[0] != tag) {
    throw ValidationError(path + ": expected header '" + tag + ",...', found '" +
                          lines_out.front() + "'");
  }
  return fields;
}

}  // namespace

void write_spd_csv(const std::string& path, const SpdMatrix& m, const Metadata* meta) {
  auto out = open_out(path, meta);
  out << "spd," << m.dim() << '\n';
  write_matrix_rows(out, m.matrix());
}

SpdMatrix read_spd_csv(const std::string& path) {
  std::vector<std::string> lines;
  const auto header = expect_header(path, "spd", 1, lines);
  const long d = parse_count(header[1], path);
  return SpdMatrix(read_matrix_rows(lines, d, d, path));
}

void write_pointcloud_csv(const std::string& path, const PointCloud& cloud,
                          const Metadata* meta) {
  auto out = open_out(path, meta);
  out << "pointcloud," << cloud.size() << ',' << cloud.dim() << '\n';
  for (int i = 0; i < cloud.size(); ++i) {
    out << format_double(cloud.weights(i));
    for (int j = 0; j < cloud.dim(); ++j) out << ',' << format_double(cloud.points(i, j));
    out << '\n';
  }
}

PointCloud read_pointcloud_csv(const std::string& path) {
  std::vector<std::string> lines;
  const auto header = expect_header(path, "pointcloud", 2, lines);
  const long n = parse_count(header[1], path);
  const long d = parse_count(header[2], path);
  const Eigen::MatrixXd rows = read_matrix_rows(lines, n, d + 1, path);
  return PointCloud(rows.rightCols(d), rows.col(0));
}

void write_gram_csv(const std::string& path, const GramMatrix& m, const Metadata* meta) {
  auto out = open_out(path, meta);
  out << "gram," << m.size() << '\n';
  write_matrix_rows(out, m.matrix());
}

GramMatrix read_gram_csv(const std::string& path) {
  std::vector<std::string> lines;
  const auto header = expect_header(path, "gram", 1, lines);
  const long p = parse_count(header[1], path);
  return GramMatrix(read_matrix_rows(lines, p, p, path));
}

void write_coords_csv(const std::string& path, const Coordinates& c, const Metadata* meta) {
  auto out = open_out(path, meta);
  out << "coords," << c.size() << '\n';
  for (int i = 0; i < c.size(); ++i) {
    if (i) out << ',';
    out << format_double(c(i));
  }
  out << '\n';
}

Coordinates read_coords_csv(const std::string& path) {
  std::vector<std::string> lines;
  const auto header = expect_header(path, "coords", 1, lines);
  const long p = parse_count(header[1], path);
  const Eigen::MatrixXd row = read_matrix_rows(lines, 1, p, path);
  return Coordinates(row.row(0).transpose());
}

void write_grid_csv(const std::string& path, const GridMeasure& g, const Metadata* meta) {
  auto out = open_out(path, meta);
  out << "grid," << g.height() << ',' << g.width() << '\n';
  write_matrix_rows(out, g.mass);
}

GridMeasure read_grid_csv(const std::string& path) {
  std::vector<std::string> lines;
  const auto header = expect_header(path, "grid", 2, lines);
  const long h = parse_count(header[1], path);
  const long w = parse_count(header[2], path);
  return GridMeasure(read_matrix_rows(lines, h, w, path));
}

}  // namespace bcm
