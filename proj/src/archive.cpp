#include "sdlearn/archive.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <bit>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace sdlearn {
namespace {

constexpr std::string_view kMagic = "SDLEARN-ARCHIVE\n";
constexpr std::string_view kSeparator = "\n%%PAYLOAD%%\n";

std::vector<unsigned char> encode_le(std::span<const double> values) {
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(values[i]);
        for (int b = 0; b < 8; ++b) bytes[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    return bytes;
}

std::vector<double> decode_le(std::span<const unsigned char> bytes) {
    std::vector<double> values(bytes.size() / 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[8 * i + b]} << (8 * b);
        values[i] = std::bit_cast<double>(bits);
    }
    return values;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t payload_checksum(std::span<const double> values) { return fnv1a64(encode_le(values)); }

std::string hex64(std::uint64_t v) {
    char buf[17];
    auto [end, ec] = std::to_chars(buf, buf + 16, v, 16);
    std::string s(buf, end);
    return std::string(16 - s.size(), '0') + s;
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double manifest_double(const Manifest& m, const std::string& path) {
    const std::string s = manifest_string(m, path);
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw CorruptFile("manifest entry '" + path + "' is not a number: " + s);
    }
    return v;
}

std::uint64_t manifest_u64(const Manifest& m, const std::string& path) {
    const std::string s = manifest_string(m, path);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw CorruptFile("manifest entry '" + path + "' is not an unsigned integer: " + s);
    }
    return v;
}

std::string manifest_string(const Manifest& m, const std::string& path) {
    auto v = m.get_optional<std::string>(path);
    if (!v) throw CorruptFile("manifest entry '" + path + "' is missing");
    return *v;
}

std::uint64_t write_archive(const std::filesystem::path& path, std::string_view kind, int version,
                            const Manifest& manifest, std::span<const double> payload) {
    const std::vector<unsigned char> bytes = encode_le(payload);
    const std::uint64_t checksum = fnv1a64(bytes);

    Manifest full;
    full.put("format.kind", std::string(kind));
    full.put("format.version", version);
    for (const auto& [section, body] : manifest) full.add_child(section, body);
    full.put("payload.encoding", "float64-le");
    full.put("payload.values", payload.size());
    full.put("payload.bytes", bytes.size());
    full.put("payload.checksum", hex64(checksum));

    std::ostringstream header;
    header << kMagic;
    boost::property_tree::write_ini(header, full);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    const std::string text = header.str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.write(kSeparator.data() + 1, static_cast<std::streamsize>(kSeparator.size() - 1));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) throw IoFailure("failed writing " + path.string());
    return checksum;
}

Archive read_archive(const std::filesystem::path& path, std::string_view kind, int version) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    const std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoFailure("failed reading " + path.string());

    if (blob.compare(0, kMagic.size(), kMagic) != 0) {
        throw CorruptFile(path.string() + " is not an sdlearn archive");
    }
    const std::size_t sep = blob.find(kSeparator, kMagic.size() - 1);
    if (sep == std::string::npos) throw CorruptFile(path.string() + ": payload marker missing");

    Archive archive;
    {
        std::istringstream header(blob.substr(kMagic.size(), sep + 1 - kMagic.size()));
        try {
            boost::property_tree::read_ini(header, archive.manifest);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw CorruptFile(path.string() + ": bad manifest: " + e.message());
        }
    }
    const std::string found_kind = manifest_string(archive.manifest, "format.kind");
    if (found_kind != kind) {
        throw CorruptFile(path.string() + ": expected a " + std::string(kind) + " archive, found " +
                          found_kind);
    }
    const std::uint64_t found_version = manifest_u64(archive.manifest, "format.version");
    if (found_version != static_cast<std::uint64_t>(version)) {
        throw VersionMismatch(path.string() + ": format version " + std::to_string(found_version) +
                              " is not supported (expected " + std::to_string(version) + ")");
    }

    const std::size_t start = sep + kSeparator.size();
    const std::span<const unsigned char> bytes(
        reinterpret_cast<const unsigned char*>(blob.data()) + start, blob.size() - start);
    const std::uint64_t expected_bytes = manifest_u64(archive.manifest, "payload.bytes");
    if (bytes.size() != expected_bytes || bytes.size() % 8 != 0 ||
        manifest_u64(archive.manifest, "payload.values") * 8 != expected_bytes) {
        throw CorruptFile(path.string() + ": payload is " + std::to_string(bytes.size()) +
                          " bytes, manifest declares " + std::to_string(expected_bytes));
    }
    archive.checksum = fnv1a64(bytes);
    if (hex64(archive.checksum) != manifest_string(archive.manifest, "payload.checksum")) {
        throw CorruptFile(path.string() + ": payload checksum mismatch");
    }
    archive.payload = decode_le(bytes);
    return archive;
}

}  // namespace sdlearn
