#pragma once

// Flat key=value text: one pair per line, '#' starts a comment, blank lines
// ignored, whitespace around keys and values trimmed. Later duplicates win.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace dectlink {

using KeyValues = std::map<std::string, std::string, std::less<>>;

// Throws ParseError (with line number) on a line without '=' or an empty key.
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

std::string_view trim(std::string_view s) noexcept;

// Whole-string numeric parse; false on trailing garbage or empty input.
bool parse_double(std::string_view s, double& out) noexcept;
bool parse_size(std::string_view s, std::size_t& out) noexcept;

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dectlink
