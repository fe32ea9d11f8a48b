#include "bcm/idx.hpp"

#include <fstream>

#include "bcm/error.hpp"

namespace bcm {

namespace {

constexpr std::uint8_t kUnsignedByteType = 0x08;

std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
  std::uint8_t raw[4];
  in.read(reinterpret_cast<char*>(raw), 4);
  if (!in) throw ValidationError("read_idx: truncated header in " + path);
  return (static_cast<std::uint32_t>(raw[0]) << 24) | (static_cast<std::uint32_t>(raw[1]) << 16) |
         (static_cast<std::uint32_t>(raw[2]) << 8) | static_cast<std::uint32_t>(raw[3]);
}

void write_be_u32(std::ostream& out, std::uint32_t v) {
  const std::uint8_t raw[4] = {static_cast<std::uint8_t>(v >> 24),
                               static_cast<std::uint8_t>(v >> 16),
                               static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  out.write(reinterpret_cast<const char*>(raw), 4);
}

}  // namespace

IdxDataset::IdxDataset(std::vector<std::uint32_t> d, std::vector<std::uint8_t> data)
    : dims(std::move(d)), payload(std::move(data)) {
  if (dims.empty() || dims.size() > 255) {
    throw ValidationError("IdxDataset: dimension count must be in [1, 255]");
  }
  std::size_t expected = 1;
  for (const auto s : dims) expected *= s;
  if (payload.size() != expected) {
    throw ValidationError("IdxDataset: payload holds " + std::to_string(payload.size()) +
                          " bytes but dims imply " + std::to_string(expected));
  }
}

std::array<std::uint8_t, 4> IdxDataset::magic() const {
  return {0x00, 0x00, kUnsignedByteType, static_cast<std::uint8_t>(dims.size())};
}

std::size_t IdxDataset::element_count() const {
  std::size_t n = 1;
  for (const auto s : dims) n *= s;
  return n;
}

IdxDataset read_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_idx: cannot open " + path);
  std::uint8_t magic[4];
  in.read(reinterpret_cast<char*>(magic), 4);
  if (!in) throw ValidationError("read_idx: truncated magic in " + path);
  if (magic[0] != 0 || magic[1] != 0 || magic[2] != kUnsignedByteType) {
    throw ValidationError("read_idx: bad magic in " + path +
                          " (only the unsigned-byte IDX type 0x08 is supported)");
  }
  const int ndims = magic[3];
  if (ndims == 0) throw ValidationError("read_idx: zero-dimensional dataset in " + path);
  std::vector<std::uint32_t> dims(ndims);
  std::size_t total = 1;
  for (int i = 0; i < ndims; ++i) {
    dims[i] = read_be_u32(in, path);
    total *= dims[i];
  }
  std::vector<std::uint8_t> payload(total);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(total));
  if (static_cast<std::size_t>(in.gcount()) != total) {
    throw ValidationError("read_idx: truncated payload in " + path);
  }
  return IdxDataset(std::move(dims), std::move(payload));
}

void write_idx(const IdxDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("write_idx: cannot open " + path + " for writing");
  const auto magic = dataset.magic();
  out.write(reinterpret_cast<const char*>(magic.data()), 4);
  for (const auto s : dataset.dims) write_be_u32(out, s);
  out.write(reinterpret_cast<const char*>(dataset.payload.data()),
            static_cast<std::streamsize>(dataset.payload.size()));
  if (!out) throw ValidationError("write_idx: failed writing " + path);
}

}  // namespace bcm
