#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gld/dataset.hpp"
#include "gld/graph_core.hpp"
#include "gld/mcit.hpp"

namespace gld {

struct ImplicationResult {
    bool accept = false;
    std::size_t B = 0;
    int theta = 0;
    int n_c = 0;
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double a_est = 0.0;
    double d1_est = 0.0;
};

// does independence of every lhs test imply independence of rhs (R_rhs <= OR R_lhs)?
ImplicationResult implication_test(const Dataset& data, const std::vector<MultiIndex>& lhs, const MultiIndex& rhs,
                                   const HyperConfig& cfg);

// caches sign-oriented score series per (query, B)
class ImplicationTester {
public:
    ImplicationTester(const Dataset& data, HyperConfig cfg) : data_(data), cfg_(cfg) {}

    ImplicationResult test(const std::vector<MultiIndex>& lhs, const MultiIndex& rhs);
    bool operator()(const std::vector<MultiIndex>& lhs, const MultiIndex& rhs) { return test(lhs, rhs).accept; }

private:
    const std::vector<double>& oriented(const MultiIndex& q, std::size_t B);

    const Dataset& data_;
    HyperConfig cfg_;
    std::mutex mu_;
    std::map<std::pair<MultiIndex, std::size_t>, std::vector<double>> cache_;
};

}  // namespace gld
