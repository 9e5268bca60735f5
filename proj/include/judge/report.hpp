#pragma once

// Report emission: atomic file writes and the JSON run manifest.

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "judge/error.hpp"

namespace judge::report {

inline constexpr int kReportFormatVersion = 1;

// Writes via a sibling temporary file and rename, so readers never observe a
// partially written output.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace judge::report
