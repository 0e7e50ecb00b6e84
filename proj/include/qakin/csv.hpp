#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qakin {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// CSV emitter with a `# schema=<name>/<version>` header line.  Rows are
/// buffered and written atomically (temp file + rename) on write().
class CsvFile {
public:
    CsvFile(std::string schema, std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_raw(std::string line);
    void write(const std::filesystem::path& path) const;

private:
    std::string schema_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

/// Atomic small-file write used for summary records.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qakin
