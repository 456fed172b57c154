#include "tables.hpp"

#include "momentbounds/errors.hpp"

#include <cmath>
#include <sstream>

namespace momentbounds::cli {

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

} // namespace

void Table::add_row(std::vector<std::string> row)
{
    if (row.size() != columns.size())
        throw Error("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected "
                    + std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& t)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_escape(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string to_json(const Table& t)
{
    nlohmann::ordered_json j;
    j["table"] = t.name;
    j["meta"] = t.meta;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i)
            r[t.columns[i]] = row[i];
        j["rows"].push_back(r);
    }
    return j.dump(2) + "\n";
}

std::string cell(double x, int digits)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

} // namespace momentbounds::cli
