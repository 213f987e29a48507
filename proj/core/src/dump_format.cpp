// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/dump_format.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <zlib.h>

#include "neuronscope/error.hpp"
#include "neuronscope/io.hpp"
#include "neuronscope/serialization.hpp"

namespace neuronscope {

std::uint32_t crc32_init() { return static_cast<std::uint32_t>(::crc32(0L, Z_NULL, 0)); }

std::uint32_t crc32_update(std::uint32_t crc, std::span<const unsigned char> bytes) {
  uLong value = crc;
  // zlib takes uInt lengths; feed large buffers in pieces.
  constexpr std::size_t kPiece = std::size_t{1} << 30;
  for (std::size_t offset = 0; offset < bytes.size(); offset += kPiece) {
    const std::size_t n = std::min(kPiece, bytes.size() - offset);
    value = ::crc32(value, bytes.data() + offset, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(value);
}

namespace {

void encode_row(std::span<const float> row, std::vector<unsigned char>& bytes) {
  bytes.resize(row.size() * 4);
  for (std::size_t i = 0; i < row.size(); ++i) {
    put_u32_le(bytes.data() + 4 * i, std::bit_cast<std::uint32_t>(row[i]));
  }
}

void decode_row(const std::vector<unsigned char>& bytes, std::span<float> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = std::bit_cast<float>(get_u32_le(bytes.data() + 4 * i));
  }
}

DumpHeader parse_header(std::istream& in) {
  unsigned char fixed[16];
  in.read(reinterpret_cast<char*>(fixed), sizeof fixed);
  if (in.gcount() != static_cast<std::streamsize>(sizeof fixed) ||
      std::memcmp(fixed, kDumpMagic.data(), 4) != 0) {
    throw_data_error("unrecognized format");
  }
  if (get_u32_le(fixed + 4) != kDumpVersion) throw_data_error("unsupported version");

  const std::uint64_t length = get_u64_le(fixed + 8);
  if (length > (std::uint64_t{1} << 34)) throw_data_error("malformed metadata");
  std::string text(static_cast<std::size_t>(length), '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (static_cast<std::uint64_t>(in.gcount()) != length) throw_data_error("truncated payload");

  Json meta;
  try {
    meta = Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw_data_error("malformed metadata");
  }
  try {
    return dump_header_from_json(meta);
  } catch (const Error& e) {
    throw_data_error(std::string("malformed metadata: ") + e.what());
  }
}

}  // namespace

DumpWriter::DumpWriter(std::ostream& out, const DumpHeader& header)
    : out_(out),
      columns_(header.schema.total()),
      expected_rows_(header.examples.size()),
      crc_(crc32_init()) {
  const std::string text = to_json(header).dump();
  unsigned char fixed[16];
  std::memcpy(fixed, kDumpMagic.data(), 4);
  put_u32_le(fixed + 4, kDumpVersion);
  put_u64_le(fixed + 8, text.size());
  out_.write(reinterpret_cast<const char*>(fixed), sizeof fixed);
  out_.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out_) throw_io_error("failed to write dump header");
}

void DumpWriter::write_row(std::span<const float> row) {
  if (finished_) throw_usage_error("dump already finished");
  if (row.size() != columns_) {
    throw_data_error("row has " + std::to_string(row.size()) + " values, schema has " +
                     std::to_string(columns_));
  }
  if (rows_written_ >= expected_rows_) throw_data_error("more rows than examples");
  require_finite(row);
  encode_row(row, scratch_);
  crc_ = crc32_update(crc_, scratch_);
  out_.write(reinterpret_cast<const char*>(scratch_.data()),
             static_cast<std::streamsize>(scratch_.size()));
  if (!out_) throw_io_error("failed to write dump payload");
  ++rows_written_;
}

void DumpWriter::finish() {
  if (finished_) return;
  if (rows_written_ != expected_rows_) {
    throw_data_error("wrote " + std::to_string(rows_written_) + " rows, header declares " +
                     std::to_string(expected_rows_));
  }
  unsigned char crc[4];
  put_u32_le(crc, crc_);
  out_.write(reinterpret_cast<const char*>(crc), 4);
  out_.flush();
  if (!out_) throw_io_error("failed to write dump checksum");
  finished_ = true;
}

DumpReader::DumpReader(std::istream& in) : in_(in), header_(parse_header(in)), crc_(crc32_init()) {}

bool DumpReader::next_row(std::span<float> row) {
  if (rows_read_ >= rows()) return false;
  if (row.size() != columns()) throw_usage_error("row buffer has the wrong size");
  scratch_.resize(columns() * 4);
  in_.read(reinterpret_cast<char*>(scratch_.data()), static_cast<std::streamsize>(scratch_.size()));
  if (static_cast<std::size_t>(in_.gcount()) != scratch_.size()) {
    throw_data_error("truncated payload");
  }
  crc_ = crc32_update(crc_, scratch_);
  decode_row(scratch_, row);
  ++rows_read_;
  return true;
}

void DumpReader::finish() {
  if (rows_read_ != rows()) throw_usage_error("finish() before reading every row");
  unsigned char crc[4];
  in_.read(reinterpret_cast<char*>(crc), 4);
  if (in_.gcount() != 4) throw_data_error("truncated payload");
  if (get_u32_le(crc) != crc_) throw_data_error("checksum mismatch");
}

void write_dataset(const ActivationDataset& dataset, std::ostream& out) {
  DumpWriter writer(out, DumpHeader{dataset.schema(), dataset.examples()});
  for (std::size_t r = 0; r < dataset.rows(); ++r) writer.write_row(dataset.row(r));
  writer.finish();
}

ActivationDataset read_dataset(std::istream& in) {
  DumpReader reader(in);
  std::vector<float> values(reader.rows() * reader.columns());
  for (std::size_t r = 0; r < reader.rows(); ++r) {
    reader.next_row(std::span<float>(values).subspan(r * reader.columns(), reader.columns()));
  }
  reader.finish();
  DumpHeader header = reader.header();
  return ActivationDataset(std::move(header.schema), std::move(header.examples),
                           std::move(values));
}

DumpHeader read_dump_header(std::istream& in) { return parse_header(in); }

void save_dataset(const ActivationDataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, [&](std::ostream& out) { write_dataset(dataset, out); });
}

ActivationDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("cannot open " + path.string());
  return read_dataset(in);
}

DumpHeader load_dump_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("cannot open " + path.string());
  return read_dump_header(in);
}

}  // namespace neuronscope
