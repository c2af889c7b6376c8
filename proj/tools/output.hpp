#pragma once

#include <string>
#include <variant>
#include <vector>

namespace ttqi::cli {

using Cell = std::variant<double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// %.9g; non-finite values print as "nan".
std::string fmt9(double v);

std::string to_csv(const Table& t);
/// {"command", "columns", "rows"}; non-finite numbers become null.
std::string to_json(const Table& t, const std::string& command);

/// Write through a temporary file in the target directory, then rename.
/// "-" writes to stdout.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace ttqi::cli
