#ifndef MOMENTBOUNDS_TOOLS_TABLES_HPP
#define MOMENTBOUNDS_TOOLS_TABLES_HPP

#include <json.hpp>

#include <string>
#include <vector>

namespace momentbounds::cli {

// Column layouts; changing these breaks the golden files on purpose.
inline const std::vector<std::string> kBartaColumns{"dim", "Q", "lambda_min"};
inline const std::vector<std::string> kPtColumns{"Q", "lambda_min"};
inline const std::vector<std::string> kBoundsColumns{"pstar", "lower", "upper"};
inline const std::vector<std::string> kPadeColumns{"Q", "lower", "upper"};
inline const std::vector<std::string> kVerifyColumns{"suite", "status", "detail"};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();

    void add_row(std::vector<std::string> row);
};

std::string to_csv(const Table& t);
/// {"table": name, "meta": {...}, "columns": [...], "rows": [{column: value}]}
std::string to_json(const Table& t);

/// Fixed-format number for table cells ("inf"/"-inf" for infinities).
std::string cell(double x, int digits = 10);

} // namespace momentbounds::cli

#endif
