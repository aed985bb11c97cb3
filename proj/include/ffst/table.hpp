#pragma once

#include <string>
#include <vector>

namespace ffst {

// column-major numeric table, one header row on disk
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;

    void add(std::string name, std::vector<double> values);
    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    const std::vector<double>& column(const std::string& name) const;  // throws DomainError
    bool has(const std::string& name) const;
};

// shortest round-trip text, at most 17 significant digits
std::string format_number(double x);

std::string to_csv(const Table& t);
void write_csv(const std::string& path, const Table& t);
Table read_csv(const std::string& path);

}  // namespace ffst
