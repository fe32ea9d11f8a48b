#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bcm {

/// Container for the IDX binary format holding unsigned bytes (the MNIST
/// layout): big-endian magic 00 00 08 <ndims>, one big-endian uint32 size per
/// dimension, then the raw payload.
struct IdxDataset {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> payload;

  IdxDataset(std::vector<std::uint32_t> d, std::vector<std::uint8_t> data);

  std::array<std::uint8_t, 4> magic() const;
  std::size_t element_count() const;
};

IdxDataset read_idx(const std::string& path);
void write_idx(const IdxDataset& dataset, const std::string& path);

}  // namespace bcm
