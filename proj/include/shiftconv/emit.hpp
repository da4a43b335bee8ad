#ifndef SHIFTCONV_EMIT_HPP
#define SHIFTCONV_EMIT_HPP

#include <string>
#include <vector>

#include "shiftconv/types.hpp"

namespace shiftconv {

// Plain numeric result table; complex quantities are split by the producer
// into `<name>_re` / `<name>_im` columns.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_g17(double v);

// header row + one line per row, floats at 17 significant digits
void emit_csv(const ResultTable& t, const std::string& path);
// array of objects mirroring the CSV columns
void emit_json(const ResultTable& t, const std::string& path);
void emit(const ResultTable& t, const std::string& format, const std::string& path);

ResultTable parse_csv(const std::string& path);

} // namespace shiftconv

#endif
