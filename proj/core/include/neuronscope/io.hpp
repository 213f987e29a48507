// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace neuronscope {

/// Writes through `fill` into a sibling temporary file, then renames it over
/// `path`. The temporary is removed if `fill` throws.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& fill);

void write_text_atomic(const std::filesystem::path& path, std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

// Little-endian scalar encoding independent of host byte order.
void put_u32_le(unsigned char* dst, std::uint32_t value);
void put_u64_le(unsigned char* dst, std::uint64_t value);
std::uint32_t get_u32_le(const unsigned char* src);
std::uint64_t get_u64_le(const unsigned char* src);

}  // namespace neuronscope
