// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "neuronscope/dump_format.hpp"
#include "neuronscope/error.hpp"
#include "neuronscope/io.hpp"

using namespace neuronscope;

namespace {

std::string to_bytes(const ActivationDataset& ds) {
  std::ostringstream out(std::ios::binary);
  write_dataset(ds, out);
  return out.str();
}

std::string read_error(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  try {
    read_dataset(in);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

ActivationDataset two_by_four() {
  const ComponentSchema schema({fixtures::small_decoder(1, 1, 1)});
  return ActivationDataset(schema,
                           {fixtures::example("de", Modality::speech, Task::s2t),
                            fixtures::example("fr", Modality::text)},
                           {0.5f, -1.0f, 2.0f, 3.25f, 4.0f, 5.0f, -6.5f, 7.0f});
}

std::size_t payload_offset(const std::string& bytes) {
  return 16 + get_u64_le(reinterpret_cast<const unsigned char*>(bytes.data()) + 8);
}

}  // namespace

TEST(DumpFormat, HeaderLayoutAndPayloadShape) {
  const auto ds = two_by_four();
  const auto bytes = to_bytes(ds);
  ASSERT_GE(bytes.size(), 16u);
  EXPECT_EQ(bytes.substr(0, 4), "NACT");
  EXPECT_EQ(get_u32_le(reinterpret_cast<const unsigned char*>(bytes.data()) + 4), 1u);
  const std::size_t payload = payload_offset(bytes);
  EXPECT_EQ(bytes.size(), payload + 2 * 4 * 4 + 4);

  // First payload float is the little-endian encoding of 0.5f.
  EXPECT_EQ(get_u32_le(reinterpret_cast<const unsigned char*>(bytes.data()) + payload),
            std::bit_cast<std::uint32_t>(0.5f));
}

TEST(DumpFormat, RoundTripPreservesEverything) {
  const auto ds = two_by_four();
  std::istringstream in(to_bytes(ds), std::ios::binary);
  const auto back = read_dataset(in);
  EXPECT_EQ(back.schema(), ds.schema());
  EXPECT_EQ(back.examples(), ds.examples());
  ASSERT_EQ(back.values().size(), ds.values().size());
  EXPECT_EQ(std::memcmp(back.values().data(), ds.values().data(), ds.values().size() * 4), 0);
}

TEST(DumpFormat, RandomizedRoundTripsAreBitExact) {
  Xoshiro256 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const ComponentSchema schema({fixtures::small_decoder(1 + rng.below(3), 1 + rng.below(4),
                                                          1 + rng.below(6))});
    const std::size_t rows = rng.below(6);
    std::vector<ExampleMeta> examples;
    for (std::size_t r = 0; r < rows; ++r) {
      examples.push_back(fixtures::example("x" + std::to_string(rng.below(5)), Modality::text));
    }
    std::vector<float> values(rows * schema.total());
    for (auto& v : values) {
      float f;
      do {
        f = std::bit_cast<float>(static_cast<std::uint32_t>(rng.next()));
      } while (!std::isfinite(f));
      v = f;
    }
    const ActivationDataset ds(schema, examples, values);
    const auto bytes = to_bytes(ds);
    std::istringstream in(bytes, std::ios::binary);
    const auto back = read_dataset(in);
    ASSERT_EQ(std::memcmp(back.values().data(), values.data(), values.size() * 4), 0);
    EXPECT_EQ(to_bytes(back), bytes);
  }
}

TEST(DumpFormat, TruncatedPayload) {
  const auto bytes = to_bytes(two_by_four());
  EXPECT_EQ(read_error(bytes.substr(0, bytes.size() - 1)), "truncated payload");
  EXPECT_EQ(read_error(bytes.substr(0, bytes.size() - 9)), "truncated payload");
  EXPECT_EQ(read_error(bytes.substr(0, 20)), "truncated payload");
}

TEST(DumpFormat, WrongMagic) {
  auto bytes = to_bytes(two_by_four());
  bytes[0] = 'X';
  EXPECT_EQ(read_error(bytes), "unrecognized format");
  EXPECT_EQ(read_error("NAC"), "unrecognized format");
}

TEST(DumpFormat, UnsupportedVersion) {
  auto bytes = to_bytes(two_by_four());
  bytes[4] = 2;
  EXPECT_EQ(read_error(bytes), "unsupported version");
}

TEST(DumpFormat, CorruptedPayloadFailsChecksum) {
  auto bytes = to_bytes(two_by_four());
  bytes[payload_offset(bytes) + 3] ^= 0x01;
  EXPECT_EQ(read_error(bytes), "checksum mismatch");

  auto crc = to_bytes(two_by_four());
  crc.back() ^= 0x80;
  EXPECT_EQ(read_error(crc), "checksum mismatch");
}

TEST(DumpFormat, MalformedMetadata) {
  auto bytes = to_bytes(two_by_four());
  bytes[16] = '[';
  EXPECT_EQ(read_error(bytes).rfind("malformed metadata", 0), 0u);
}

TEST(DumpFormat, NonFiniteValuesAreRefusedOnWrite) {
  const auto ds = two_by_four();
  const std::vector<float> bad = {1.0f, std::numeric_limits<float>::quiet_NaN(), 0, 0};
  std::ostringstream out;
  DumpWriter writer(out, DumpHeader{ds.schema(), ds.examples()});
  try {
    writer.write_row(bad);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "non-finite activation");
  }
}

TEST(DumpFormat, WriterRejectsShapeMismatch) {
  const auto ds = two_by_four();
  std::ostringstream out;
  DumpWriter writer(out, DumpHeader{ds.schema(), ds.examples()});
  EXPECT_THROW(writer.write_row(std::vector<float>(3)), Error);
  writer.write_row(ds.row(0));
  EXPECT_THROW(writer.finish(), Error);  // one row short
}

TEST(DumpFormat, StreamingReaderYieldsRowsThenChecksCrc) {
  const auto ds = two_by_four();
  std::istringstream in(to_bytes(ds), std::ios::binary);
  DumpReader reader(in);
  EXPECT_EQ(reader.rows(), 2u);
  std::vector<float> row(reader.columns());
  std::size_t seen = 0;
  while (reader.next_row(row)) {
    EXPECT_TRUE(std::equal(row.begin(), row.end(), ds.row(seen).begin()));
    ++seen;
  }
  EXPECT_EQ(seen, 2u);
  EXPECT_NO_THROW(reader.finish());
}

TEST(DumpFormat, HeaderOnlyRead) {
  const auto ds = two_by_four();
  std::istringstream in(to_bytes(ds), std::ios::binary);
  const auto header = read_dump_header(in);
  EXPECT_EQ(header.examples.size(), 2u);
  EXPECT_EQ(header.schema.total(), 4u);
}

TEST(DumpFormat, FileRoundTripIsAtomic) {
  fixtures::TempDir dir;
  const auto path = dir / "a.nact";
  save_dataset(two_by_four(), path);
  EXPECT_EQ(load_dataset(path).values().size(), 8u);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir.path())) {
    ++files;
  }
  EXPECT_EQ(files, 1u);  // no temporaries left behind
  EXPECT_THROW(load_dataset(dir / "missing.nact"), Error);
}

TEST(DumpFormat, Crc32MatchesKnownVector) {
  const std::string text = "123456789";
  const std::span<const unsigned char> bytes(reinterpret_cast<const unsigned char*>(text.data()),
                                             text.size());
  EXPECT_EQ(crc32_update(crc32_init(), bytes), 0xCBF43926u);
}
