#pragma once

#include <filesystem>
#include <string>

// Fresh per-test directory under the build tree.
inline std::filesystem::path test_scratch_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::path(SDLEARN_TEST_SCRATCH) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
