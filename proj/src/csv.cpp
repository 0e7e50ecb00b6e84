#include "qakin/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>
#include <utility>

#include "qakin/common.hpp"

namespace qakin {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

CsvFile::CsvFile(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {}

void CsvFile::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("CsvFile: row width does not match the column list");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    rows_.push_back(std::move(line));
}

void CsvFile::add_row_raw(std::string line) { rows_.push_back(std::move(line)); }

void CsvFile::write(const std::filesystem::path& path) const {
    std::string content = "# schema=" + schema_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) content += ',';
        content += columns_[i];
    }
    content += '\n';
    for (const auto& row : rows_) {
        content += row;
        content += '\n';
    }
    write_text_atomic(path, content);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw io_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace qakin
