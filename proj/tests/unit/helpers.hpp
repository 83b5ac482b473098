#pragma once

#include "chainspill/timebase.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace test {

inline chainspill::HalfDayId hd(const char* date, chainspill::Half h = chainspill::Half::H1) {
    return {chainspill::parse_date(date), h};
}

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(CHAINSPILL_FIXTURE_DIR) / name;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("chainspill_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace test
