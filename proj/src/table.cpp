#include "ffst/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ffst/errors.hpp"

namespace ffst {

void Table::add(std::string name, std::vector<double> values) {
    if (!data.empty() && values.size() != rows()) throw DomainError("column " + name + " has the wrong length");
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
}

bool Table::has(const std::string& name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return data[i];
    throw DomainError("table has no column " + name);
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t i = 0; i < t.data.size(); ++i) {
            if (i) out += ',';
            out += format_number(t.data[i][r]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const Table& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path);
    f << to_csv(t);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    return out;
}

double parse_number(const std::string& s, const std::string& where) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double x = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw DomainError(where + ": not a number: " + s);
    return x;
}

}  // namespace

Table read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw DomainError(path + ": empty table");
    Table t;
    t.columns = split(line);
    t.data.resize(t.columns.size());
    std::size_t row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw DomainError(path + ":" + std::to_string(row) + ": expected " + std::to_string(t.columns.size()) +
                              " cells");
        for (std::size_t i = 0; i < cells.size(); ++i)
            t.data[i].push_back(parse_number(cells[i], path + ":" + std::to_string(row)));
    }
    return t;
}

}  // namespace ffst
