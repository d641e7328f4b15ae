#include "gld/dataset.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace gld {

Dataset Dataset::with_vars(int k, std::size_t n) {
    Dataset d;
    for (int i = 0; i < k; ++i) {
        d.names.push_back("X" + std::to_string(i));
        d.cols.emplace_back(n, 0.0);
    }
    return d;
}

void write_csv(std::ostream& os, const Dataset& d) {
    for (int i = 0; i < d.vars(); ++i) os << (i ? "," : "") << d.names[i];
    os << '\n';
    char buf[64];
    for (std::size_t t = 0; t < d.rows(); ++t) {
        for (int i = 0; i < d.vars(); ++i) {
            auto r = std::to_chars(buf, buf + sizeof buf, d.cols[i][t]);
            if (i) os << ',';
            os.write(buf, r.ptr - buf);
        }
        os << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        std::string f = line.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        while (!f.empty() && f.front() == ' ') f.erase(f.begin());
        out.push_back(f);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

Dataset read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
    Dataset d;
    d.names = split(line);
    if (d.names.empty() || (d.names.size() == 1 && d.names[0].empty())) throw std::runtime_error("csv: empty header");
    d.cols.resize(d.names.size());
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto f = split(line);
        if (f.size() != d.names.size())
            throw std::runtime_error("csv: row " + std::to_string(row) + " has " + std::to_string(f.size()) + " fields");
        for (std::size_t i = 0; i < f.size(); ++i) {
            double v = 0;
            auto r = std::from_chars(f[i].data(), f[i].data() + f[i].size(), v);
            if (r.ec != std::errc() || r.ptr != f[i].data() + f[i].size() || !std::isfinite(v))
                throw std::runtime_error("csv: bad number '" + f[i] + "' at row " + std::to_string(row));
            d.cols[i].push_back(v);
        }
    }
    return d;
}

}  // namespace gld
