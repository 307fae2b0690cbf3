#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace mused {

/// Parses one JSON value per non-blank line. Throws IoError naming the path
/// and 1-based line number of the first corrupt line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

void write_jsonl(const std::filesystem::path& path, std::span<const nlohmann::json> rows);

/// Streaming writer; rows are compact single-line dumps.
class JsonlWriter {
public:
    explicit JsonlWriter(const std::filesystem::path& path);
    void write(const nlohmann::json& row);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace mused
