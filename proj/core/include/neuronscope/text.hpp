// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace neuronscope::text {

// UTF-8 <-> code points. Invalid UTF-8 throws Error(data) "invalid UTF-8".
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view code_points);

/// Unicode NFC, optionally followed by full (root locale) lowercasing.
std::u32string normalize(std::string_view utf8, bool lowercase);

bool is_whitespace(char32_t c);

std::vector<std::u32string> split_whitespace(std::u32string_view text);

/// Removes every whitespace code point.
std::u32string strip_whitespace(std::u32string_view text);

/// mteval-v13a style tokenization: unescapes the four XML entities, splits
/// ASCII punctuation and symbols into their own tokens, separates '.' and ','
/// unless they sit between digits, and splits '-' after a digit.
std::vector<std::u32string> tokenize_13a(std::u32string_view text);

/// One token per non-whitespace code point (used for ja/zh).
std::vector<std::u32string> tokenize_characters(std::u32string_view text);

}  // namespace neuronscope::text
