#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gld/dataset.hpp"
#include "gld/graph_core.hpp"

namespace gld {

struct Block {
    std::size_t begin;
    std::size_t end;
};

struct Pattern {
    std::size_t block_size = 0;
    std::vector<Block> blocks;
};

Pattern partition(std::size_t n, std::size_t B);

struct BlockScore {
    double z = 0.0;
    bool degenerate = false;
};

// Fisher z of the partial correlation of x, y given z on rows [begin, end)
BlockScore block_score(const Dataset& data, const MultiIndex& q, Block block);
// same, on an arbitrary row subset
BlockScore subset_score(const Dataset& data, const MultiIndex& q, const std::vector<std::size_t>& rows);

struct ScoreSeries {
    std::vector<double> scores;
    std::vector<char> degenerate;
    std::size_t B = 0;
    int z_dim = 0;
    double sigma_B = 0.0;

    std::size_t theta() const { return scores.size(); }
    double mean() const;
};

double fisher_sigma(std::size_t n, int z_dim);

ScoreSeries score_series(const Dataset& data, const MultiIndex& q, std::size_t B);

struct FullZ {
    double z = 0.0;
    double sigma = 0.0;
    bool degenerate = false;
};

FullZ full_data_z(const Dataset& data, const MultiIndex& q);

// atanh with the correlation clipped to +-(1 - 1e-12)
double clipped_fisher_z(double r);

}  // namespace gld
