// SPDX-License-Identifier: Apache-2.0
#pragma once

// Activation dump, version 1. All integers little-endian.
//
//   offset  size  field
//   0       4     magic "NACT"
//   4       4     u32 version (= 1)
//   8       8     u64 metadata length L
//   16      L     metadata, UTF-8 JSON: {"examples":[...],"schema":{...}}
//   16+L    4*R*C row-major float32 payload (R examples x C neurons)
//   ...     4     u32 CRC-32 (IEEE, zlib polynomial) of the payload bytes
//
// Error messages produced while reading:
//   "unrecognized format"   magic mismatch or short header
//   "unsupported version"   version != 1
//   "malformed metadata"    metadata is not valid JSON or misses fields
//   "truncated payload"     fewer payload or CRC bytes than declared
//   "checksum mismatch"     CRC does not match the payload
//   "non-finite activation" NaN/Inf in the payload

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "neuronscope/activation_store.hpp"

namespace neuronscope {

inline constexpr std::array<char, 4> kDumpMagic = {'N', 'A', 'C', 'T'};
inline constexpr std::uint32_t kDumpVersion = 1;

struct DumpHeader {
  ComponentSchema schema;
  std::vector<ExampleMeta> examples;
};

/// Streams rows into a dump. Rows must be written in example order; finish()
/// appends the checksum and fails if the row count is short.
class DumpWriter {
 public:
  DumpWriter(std::ostream& out, const DumpHeader& header);
  DumpWriter(const DumpWriter&) = delete;
  DumpWriter& operator=(const DumpWriter&) = delete;

  void write_row(std::span<const float> row);
  void finish();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t expected_rows_;
  std::size_t rows_written_ = 0;
  std::uint32_t crc_;
  bool finished_ = false;
  std::vector<unsigned char> scratch_;
};

/// Streams rows out of a dump holding at most one row in memory.
class DumpReader {
 public:
  explicit DumpReader(std::istream& in);

  const DumpHeader& header() const { return header_; }
  std::size_t columns() const { return header_.schema.total(); }
  std::size_t rows() const { return header_.examples.size(); }

  // Fills `row` (size columns()) with the next example; false once all rows
  // have been consumed.
  bool next_row(std::span<float> row);

  // Reads and checks the trailing CRC. Call after the last row.
  void finish();

 private:
  std::istream& in_;
  DumpHeader header_;
  std::size_t rows_read_ = 0;
  std::uint32_t crc_;
  std::vector<unsigned char> scratch_;
};

void write_dataset(const ActivationDataset& dataset, std::ostream& out);
ActivationDataset read_dataset(std::istream& in);

// Header only; the payload is not touched.
DumpHeader read_dump_header(std::istream& in);

// File variants. save_dataset writes to a temporary file and renames.
void save_dataset(const ActivationDataset& dataset, const std::filesystem::path& path);
ActivationDataset load_dataset(const std::filesystem::path& path);
DumpHeader load_dump_header(const std::filesystem::path& path);

// CRC-32 helpers shared with other binary sidecars.
std::uint32_t crc32_update(std::uint32_t crc, std::span<const unsigned char> bytes);
std::uint32_t crc32_init();

}  // namespace neuronscope
