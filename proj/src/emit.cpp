#include "shiftconv/emit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace shiftconv {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_csv(const ResultTable& t, const std::string& path) {
    for (const auto& r : t.rows)
        if (r.size() != t.columns.size()) throw IoError("ragged result table");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& r : t.rows) {
        for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_g17(r[i]);
        out << "\n";
    }
}

void emit_json(const ResultTable& t, const std::string& path) {
    for (const auto& r : t.rows)
        if (r.size() != t.columns.size()) throw IoError("ragged result table");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json obj;
        for (size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = r[i];
        arr.push_back(obj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << arr.dump(2) << "\n";
}

void emit(const ResultTable& t, const std::string& format, const std::string& path) {
    if (format == "csv")
        emit_csv(t, path);
    else if (format == "json")
        emit_json(t, path);
    else
        throw DomainError("unknown output format: " + format);
}

ResultTable parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    ResultTable t;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty csv");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.columns.size()) throw ParseError(path + ": ragged row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace shiftconv
