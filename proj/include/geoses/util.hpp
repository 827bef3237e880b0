#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geoses {

inline constexpr std::string_view kToolVersion = "0.1.0";

// FNV-1a 64-bit. Used for provenance hashes in manifests and export headers;
// not a cryptographic digest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
bool file_exists(const std::string& path);
std::string file_hash_hex(const std::string& path);

// Locale-independent formatting via std::to_chars, general format with the
// given number of significant digits.
std::string format_double(double v, int significant_digits);

// Locale-independent parse; throws ParseError on trailing garbage.
double parse_double(std::string_view text, const std::string& context);

// UTC timestamp, RFC 3339. Honors SOURCE_DATE_EPOCH so runs can be made
// byte-reproducible.
std::string utc_timestamp();

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace geoses
