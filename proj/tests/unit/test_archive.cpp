#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sdlearn/archive.hpp"
#include "test_paths.hpp"

using namespace sdlearn;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}
void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}
}  // namespace

TEST_CASE("FNV-1a reference values") {
    const std::string empty;
    CHECK(fnv1a64({reinterpret_cast<const unsigned char*>(empty.data()), 0}) == 0xcbf29ce484222325ull);
    const std::string a = "a";
    CHECK(fnv1a64({reinterpret_cast<const unsigned char*>(a.data()), 1}) == 0xaf63dc4c8601ec8cull);
    const std::string foobar = "foobar";
    CHECK(fnv1a64({reinterpret_cast<const unsigned char*>(foobar.data()), 6}) == 0x85944171f73967e8ull);
    CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("archive round trip and failure modes") {
    const auto dir = test_scratch_dir("archive");
    const auto path = dir / "a.bin";
    Manifest m;
    m.put("thing.name", "x");
    m.put("thing.value", format_double(0.1));
    const std::vector<double> payload{1.0, -0.5, 1e-300, 3.141592653589793};
    const std::uint64_t sum = write_archive(path, "toy", 3, m, payload);
    CHECK(sum == payload_checksum(payload));

    const Archive a = read_archive(path, "toy", 3);
    CHECK(a.payload == payload);
    CHECK(manifest_string(a.manifest, "thing.name") == "x");
    CHECK(manifest_double(a.manifest, "thing.value") == 0.1);
    CHECK_THROWS_AS(manifest_double(a.manifest, "thing.missing"), CorruptFile);

    CHECK_THROWS_AS(read_archive(path, "toy", 4), VersionMismatch);
    CHECK_THROWS_AS(read_archive(path, "other", 3), CorruptFile);
    CHECK_THROWS_AS(read_archive(dir / "missing.bin", "toy", 3), IoFailure);

    const std::string bytes = slurp(path);
    spit(dir / "truncated.bin", bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_archive(dir / "truncated.bin", "toy", 3), CorruptFile);

    std::string flipped = bytes;
    flipped[flipped.size() - 2] ^= 0x10;
    spit(dir / "flipped.bin", flipped);
    CHECK_THROWS_AS(read_archive(dir / "flipped.bin", "toy", 3), CorruptFile);

    spit(dir / "garbage.bin", "not an archive at all");
    CHECK_THROWS_AS(read_archive(dir / "garbage.bin", "toy", 3), CorruptFile);
}
