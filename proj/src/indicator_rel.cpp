#include "gld/indicator_rel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "gld/stats.hpp"

namespace gld {

ImplicationResult implication_test(const Dataset& data, const std::vector<MultiIndex>& lhs, const MultiIndex& rhs,
                                   const HyperConfig& cfg) {
    ImplicationTester t(data, cfg);
    return t.test(lhs, rhs);
}

const std::vector<double>& ImplicationTester::oriented(const MultiIndex& q, std::size_t B) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(q, B);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto s = score_series(data_, q, B);
    if (s.mean() < 0.0)
        for (double& v : s.scores) v = -v;
    return cache_.emplace(key, std::move(s.scores)).first->second;
}

ImplicationResult ImplicationTester::test(const std::vector<MultiIndex>& lhs_raw, const MultiIndex& rhs_raw) {
    if (lhs_raw.empty()) throw std::invalid_argument("implication_test: empty lhs");
    constexpr double a_min = 0.05;
    const std::size_t N = data_.rows();
    std::vector<MultiIndex> lhs;
    for (const auto& q : lhs_raw) lhs.push_back(MultiIndex::make(q.x, q.y, q.z));
    const MultiIndex rhs = MultiIndex::make(rhs_raw.x, rhs_raw.y, rhs_raw.z);

    ImplicationResult r;
    std::size_t B = 0;
    int zmax = static_cast<int>(rhs.z.size());
    B = hyperparams(N, zmax, cfg_).weak_B;
    for (const auto& q : lhs) {
        B = std::max(B, hyperparams(N, static_cast<int>(q.z.size()), cfg_).weak_B);
        zmax = std::max(zmax, static_cast<int>(q.z.size()));
    }
    r.B = B;
    if (static_cast<double>(B) - 3.0 - zmax < 2.0 || B > N) return r;

    std::vector<const std::vector<double>*> ls;
    std::vector<double> cs;
    for (const auto& q : lhs) {
        ls.push_back(&oriented(q, B));
        cs.push_back(hyperparams(N, static_cast<int>(q.z.size()), cfg_).c);
    }
    const auto& rs = oriented(rhs, B);
    const HyperSet hr = hyperparams(N, static_cast<int>(rhs.z.size()), cfg_);
    const double sigma = fisher_sigma(B, static_cast<int>(rhs.z.size()));
    r.theta = static_cast<int>(rs.size());

    double sel = 0.0;
    for (int t = 0; t < r.theta; ++t) {
        bool cand = true;
        for (std::size_t i = 0; i < ls.size() && cand; ++i) cand = (*ls[i])[t] < cs[i];
        if (cand) {
            sel += rs[t];
            ++r.n_c;
        }
    }
    if (r.n_c < cfg_.n0_min || r.n_c == 0) return r;

    r.mean = sel / r.n_c;
    const double d_est = std::accumulate(rs.begin(), rs.end(), 0.0) / r.theta;
    r.a_est = std::clamp(static_cast<double>(r.n_c) / r.theta, a_min, 1.0 - a_min);
    r.d1_est = (d_est - r.a_est * r.mean) / (1.0 - r.a_est);
    const double half = acceptance_halfwidth(sigma, cfg_.alpha_weak, r.n_c);
    r.lo = trunc_normal_mean(0.0, sigma, hr.c) - half;
    r.hi = half + std::max(0.0, r.d1_est) * (1.0 - stats::norm_cdf(hr.c / sigma));
    r.accept = r.mean >= r.lo && r.mean <= r.hi;
    return r;
}

}  // namespace gld
