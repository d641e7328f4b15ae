#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace gld {

// column-major N x K table; row order is the pattern index
struct Dataset {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;

    std::size_t rows() const { return cols.empty() ? 0 : cols.front().size(); }
    int vars() const { return static_cast<int>(cols.size()); }
    const std::vector<double>& col(int i) const { return cols.at(static_cast<std::size_t>(i)); }

    static Dataset with_vars(int k, std::size_t n);
};

void write_csv(std::ostream& os, const Dataset& d);
Dataset read_csv(std::istream& is);  // throws std::runtime_error on malformed input

}  // namespace gld
