#include "gld/blocks_score.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace gld {

Pattern partition(std::size_t n, std::size_t B) {
    if (B == 0) throw std::invalid_argument("partition: block size 0");
    Pattern p;
    p.block_size = B;
    for (std::size_t t = 0; (t + 1) * B <= n; ++t) p.blocks.push_back({t * B, (t + 1) * B});
    return p;
}

double clipped_fisher_z(double r) {
    constexpr double lim = 1.0 - 1e-12;
    return std::atanh(std::clamp(r, -lim, lim));
}

double fisher_sigma(std::size_t n, int z_dim) {
    double dof = static_cast<double>(n) - 3.0 - z_dim;
    if (dof < 1.0) throw std::invalid_argument("fisher z: degrees of freedom exhausted");
    return 1.0 / std::sqrt(dof);
}

double ScoreSeries::mean() const {
    if (scores.empty()) return 0.0;
    return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

namespace {

// centers v in place; false if (numerically) constant
bool center(Eigen::VectorXd& v) {
    double raw = v.squaredNorm();
    v.array() -= v.mean();
    return v.squaredNorm() > 1e-20 * raw && v.squaredNorm() > 0.0;
}

template <class RowAt>
BlockScore score_rows(const Dataset& data, const MultiIndex& q, std::size_t m, RowAt row) {
    const auto& cx = data.col(q.x);
    const auto& cy = data.col(q.y);
    Eigen::VectorXd x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = cx[row(i)];
        y[i] = cy[row(i)];
    }
    if (!center(x) || !center(y)) return {0.0, true};

    if (!q.z.empty()) {
        Eigen::MatrixXd Z(m, q.z.size());
        for (std::size_t k = 0; k < q.z.size(); ++k) {
            const auto& cz = data.col(q.z[k]);
            for (std::size_t i = 0; i < m; ++i) Z(i, k) = cz[row(i)];
        }
        Z.rowwise() -= Z.colwise().mean();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
        qr.setThreshold(1e-10);
        double sx = x.squaredNorm(), sy = y.squaredNorm();
        if (qr.rank() > 0) {
            x -= Z * qr.solve(x);
            y -= Z * qr.solve(y);
        }
        if (x.squaredNorm() <= 1e-20 * sx || y.squaredNorm() <= 1e-20 * sy) return {0.0, true};
    }
    double r = x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
    return {clipped_fisher_z(r), false};
}

void check_query(const Dataset& data, const MultiIndex& q) {
    auto bad = [&](int v) { return v < 0 || v >= data.vars(); };
    if (bad(q.x) || bad(q.y)) throw std::out_of_range("score: variable index");
    for (int v : q.z)
        if (bad(v)) throw std::out_of_range("score: variable index");
}

}  // namespace

BlockScore block_score(const Dataset& data, const MultiIndex& q, Block b) {
    check_query(data, q);
    if (b.end > data.rows() || b.end <= b.begin) throw std::out_of_range("block_score: block range");
    fisher_sigma(b.end - b.begin, static_cast<int>(q.z.size()));
    return score_rows(data, q, b.end - b.begin, [&](std::size_t i) { return b.begin + i; });
}

BlockScore subset_score(const Dataset& data, const MultiIndex& q, const std::vector<std::size_t>& rows) {
    check_query(data, q);
    fisher_sigma(rows.size(), static_cast<int>(q.z.size()));
    return score_rows(data, q, rows.size(), [&](std::size_t i) { return rows[i]; });
}

ScoreSeries score_series(const Dataset& data, const MultiIndex& q, std::size_t B) {
    ScoreSeries s;
    s.B = B;
    s.z_dim = static_cast<int>(q.z.size());
    s.sigma_B = fisher_sigma(B, s.z_dim);
    auto pat = partition(data.rows(), B);
    if (pat.blocks.empty()) throw std::invalid_argument("score_series: no usable blocks");
    s.scores.reserve(pat.blocks.size());
    for (const auto& b : pat.blocks) {
        auto r = block_score(data, q, b);
        s.scores.push_back(r.z);
        s.degenerate.push_back(r.degenerate ? 1 : 0);
    }
    return s;
}

FullZ full_data_z(const Dataset& data, const MultiIndex& q) {
    const std::size_t n = data.rows();
    FullZ f;
    f.sigma = fisher_sigma(n, static_cast<int>(q.z.size()));
    auto r = block_score(data, q, {0, n});
    f.z = r.z;
    f.degenerate = r.degenerate;
    return f;
}

}  // namespace gld
