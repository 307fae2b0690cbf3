#include "mused/jsonl.hpp"

#include <string>

#include "mused/types.hpp"

namespace mused {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<nlohmann::json> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded())
            throw IoError(path.string() + ":" + std::to_string(number) + ": corrupt JSON line");
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("read error on " + path.string());
    return rows;
}

void write_jsonl(const std::filesystem::path& path, std::span<const nlohmann::json> rows) {
    JsonlWriter writer(path);
    for (const auto& row : rows) writer.write(row);
    writer.close();
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
}

void JsonlWriter::write(const nlohmann::json& row) {
    out_ << row.dump() << '\n';
    if (!out_) throw IoError("write failed on " + path_.string());
}

void JsonlWriter::close() {
    out_.close();
    if (out_.fail()) throw IoError("closing " + path_.string() + " failed");
}

}  // namespace mused
