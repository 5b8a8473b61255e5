// Single-file container shared by datasets and model checkpoints:
//
//   SDLEARN-ARCHIVE\n
//   <INI manifest, UTF-8>
//   %%PAYLOAD%%\n
//   <payload: little-endian IEEE-754 float64 values>
//
// The manifest always carries [format] kind/version and [payload]
// values/bytes/checksum, where checksum is FNV-1a 64 of the payload bytes
// written as 16 lowercase hex digits.
#pragma once

#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdlearn {

class IoFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class CorruptFile : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class VersionMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Manifest = boost::property_tree::ptree;

struct Archive {
    Manifest manifest;
    std::vector<double> payload;
    std::uint64_t checksum = 0;
};

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

std::string hex64(std::uint64_t v);

// fnv1a64 of the little-endian encoding of `values`.
std::uint64_t payload_checksum(std::span<const double> values);

// Shortest round-trip decimal form.
std::string format_double(double v);

// Typed manifest access; missing or malformed entries raise CorruptFile.
double manifest_double(const Manifest& m, const std::string& path);
std::uint64_t manifest_u64(const Manifest& m, const std::string& path);
std::string manifest_string(const Manifest& m, const std::string& path);

// Returns the payload checksum.
std::uint64_t write_archive(const std::filesystem::path& path, std::string_view kind, int version,
                            const Manifest& manifest, std::span<const double> payload);

Archive read_archive(const std::filesystem::path& path, std::string_view kind, int version);

}  // namespace sdlearn
