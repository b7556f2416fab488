#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace collabnet {

/// FNV-1a 64-bit digest, used to fingerprint inputs and outputs in the run
/// manifest.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t value);

/// Serialize with 17 significant digits so doubles round-trip exactly.
std::string fmt_g17(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace collabnet
