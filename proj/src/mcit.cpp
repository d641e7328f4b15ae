#include "gld/mcit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "gld/rng.hpp"
#include "gld/stats.hpp"

namespace gld {

const char* to_string(Mark m) {
    switch (m) {
        case Mark::Independent: return "independent";
        case Mark::Dependent: return "dependent";
        case Mark::Regime: return "regime";
    }
    return "?";
}

HyperConfig HyperConfig::preset(const std::string& name) {
    HyperConfig c;
    if (name == "generic") return c;
    if (name == "large") {
        c.prior = RegimePrior::Large;
        return c;
    }
    if (name == "generic-weak20") {
        c.alpha_weak = 0.2;
        return c;
    }
    if (name == "large-weak20") {
        c.prior = RegimePrior::Large;
        c.alpha_weak = 0.2;
        return c;
    }
    throw std::invalid_argument("unknown hyperparameter preset: " + name);
}

HyperSet hyperparams(std::size_t N, int z_dim, RegimePrior prior) {
    HyperConfig c;
    c.prior = prior;
    return hyperparams(N, z_dim, c);
}

HyperSet hyperparams(std::size_t N, int z_dim, const HyperConfig& cfg) {
    HyperSet h;
    h.cfg = cfg;
    h.N = N;
    h.z_dim = z_dim;
    const double z = z_dim;
    double hom, weak;
    if (cfg.prior == RegimePrior::Generic) {
        hom = std::round(5.0 * std::log10(static_cast<double>(std::max<std::size_t>(N, 1))) - 3.0 + 1.5 * z);
        weak = std::round(11.0 + 1.6 * z);
        h.c = 0.275 - 0.00125 * z;
    } else {
        hom = std::round(30.0 + 1.5 * z);
        weak = std::round(31.0 + 1.4 * z);
        h.c = 0.2;
    }
    const auto clampB = [&](double b) {
        auto B = static_cast<std::size_t>(std::max(b, z + 5.0));
        return std::max<std::size_t>(1, std::min(B, N / 5));
    };
    h.hom_B = clampB(hom);
    h.weak_B = clampB(weak);
    h.n0_min = cfg.n0_min;
    if (cfg.a_min > 0.0 && h.weak_B > static_cast<std::size_t>(z_dim) + 3)
        h.n0_min = std::max(h.n0_min, binomial_n0_min(static_cast<int>(N / h.weak_B), cfg.a_min, h.c,
                                                      fisher_sigma(h.weak_B, z_dim), cfg.alpha_weak));
    return h;
}

int binomial_n0_min(int theta, double a_min, double c, double sigma_B, double alpha) {
    const auto n0 = static_cast<int>(std::lround(a_min * theta));
    if (n0 <= 0) return 0;
    boost::math::binomial_distribution<double> bin(n0, stats::norm_cdf(c / sigma_B));
    int n = 0;
    while (n <= n0 && boost::math::cdf(bin, n) < alpha) ++n;
    return n;
}

double trunc_normal_mean(double mu, double sigma, double c) {
    if (!(sigma > 0.0)) throw std::invalid_argument("trunc_normal_mean: sigma <= 0");
    if (std::isinf(c) && c > 0) return mu;
    const double b = (c - mu) / sigma;
    if (b < -38.0) return c;
    return mu - sigma * stats::norm_pdf(b) / stats::norm_cdf(b);
}

double quantile_lower_analytic(const ScoreSeries& s, double beta) {
    return s.mean() + stats::norm_quantile(beta) * s.sigma_B;
}

double quantile_lower_bootstrap(const Dataset& data, const MultiIndex& q, std::size_t B, double beta, int n_boot,
                                std::uint64_t seed) {
    if (n_boot < 200) throw std::invalid_argument("bootstrap: n_boot < 200");
    const std::size_t n = data.rows();
    if (B > n) throw std::invalid_argument("bootstrap: insufficient data");
    auto rng = make_rng(seed, {static_cast<std::uint64_t>(MultiIndexHash{}(q)), B});
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> scores;
    scores.reserve(n_boot);
    std::vector<std::size_t> rows(B);
    for (int b = 0; b < n_boot; ++b) {
        for (std::size_t i = 0; i < B; ++i) {
            boost::random::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(idx[i], idx[pick(rng)]);
            rows[i] = idx[i];
        }
        scores.push_back(subset_score(data, q, rows).z);
    }
    std::sort(scores.begin(), scores.end());
    // linear interpolation between order statistics
    double pos = beta * (n_boot - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min<std::size_t>(lo + 1, scores.size() - 1);
    return scores[lo] + (pos - lo) * (scores[hi] - scores[lo]);
}

double homogeneity_p_value(int theta, double beta, int k) { return stats::binom_upper_tail(theta, beta, k); }

int rejection_count(int theta, double beta0, double alpha) {
    // the tail is non-increasing in k
    int lo = 0, hi = theta + 1;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (homogeneity_p_value(theta, beta0, mid) < alpha) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

double enlarge_beta(int theta, int k0, double alpha, double beta0) {
    if (k0 > theta) return beta0;
    double lo = beta0, hi = 1.0;
    if (!(homogeneity_p_value(theta, lo, k0) < alpha)) return beta0;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if (homogeneity_p_value(theta, mid, k0) < alpha) lo = mid;
        else hi = mid;
    }
    return lo;
}

HomogeneityResult homogeneity_test(const ScoreSeries& s, const HyperSet& h, const QuantileFn& quantile) {
    HomogeneityResult r;
    r.theta = static_cast<int>(s.theta());
    r.beta = h.cfg.beta0;
    if (r.theta < 5) return r;
    r.k0 = rejection_count(r.theta, h.cfg.beta0, h.cfg.alpha);
    if (r.k0 > r.theta) return r;
    r.decided = true;
    r.beta = enlarge_beta(r.theta, r.k0, h.cfg.alpha, h.cfg.beta0);
    r.q = quantile ? quantile(r.beta) : quantile_lower_analytic(s, r.beta);
    r.k = static_cast<int>(std::count_if(s.scores.begin(), s.scores.end(), [&](double v) { return v < r.q; }));
    r.p0 = homogeneity_p_value(r.theta, r.beta, r.k);
    r.reject = r.p0 < h.cfg.alpha;
    return r;
}

double acceptance_halfwidth(double sigma_B, double alpha_weak, int n_c) {
    return sigma_B * stats::norm_quantile(1.0 - alpha_weak / 2.0) / std::sqrt(static_cast<double>(n_c));
}

WeakResult weak_regime_test(const ScoreSeries& s, const HyperSet& h) {
    WeakResult w;
    w.flipped = s.mean() < 0.0;
    const double sign = w.flipped ? -1.0 : 1.0;
    double sum = 0.0;
    for (double v : s.scores)
        if (sign * v < h.c) {
            sum += sign * v;
            ++w.n_c;
        }
    if (w.n_c < h.n0_min || w.n_c == 0) return w;
    w.mean = sum / w.n_c;
    const double half = acceptance_halfwidth(s.sigma_B, h.cfg.alpha_weak, w.n_c);
    w.lo = trunc_normal_mean(0.0, s.sigma_B, h.c) - half;
    w.hi = half;
    w.independent = w.mean >= w.lo && w.mean <= w.hi;
    return w;
}

nlohmann::json MarkedValue::diagnostics() const {
    nlohmann::json j = {{"tag", to_string(tag)},
                        {"fallback", fallback},
                        {"z_full", z_full},
                        {"p_full", p_full},
                        {"hom_B", hom_B},
                        {"weak_B", weak_B},
                        {"homogeneity",
                         {{"decided", hom.decided},
                          {"reject", hom.reject},
                          {"p0", hom.p0},
                          {"k", hom.k},
                          {"k0", hom.k0},
                          {"theta", hom.theta},
                          {"beta", hom.beta}}}};
    if (weak)
        j["weak"] = {{"independent", weak->independent}, {"n_c", weak->n_c}, {"mean", weak->mean},
                     {"lo", weak->lo}, {"hi", weak->hi}};
    return j;
}

namespace {

void full_test(const Dataset& data, const MultiIndex& q, double alpha, MarkedValue& v) {
    auto f = full_data_z(data, q);
    v.z_full = f.z;
    v.sigma_full = f.sigma;
    v.p_full = f.degenerate ? 1.0 : 2.0 * (1.0 - stats::norm_cdf(std::abs(f.z) / f.sigma));
    v.tag = v.p_full < alpha ? Mark::Dependent : Mark::Independent;
}

}  // namespace

bool fisher_z_independent(const Dataset& data, const MultiIndex& q, double alpha) {
    MarkedValue v;
    full_test(data, q, alpha, v);
    return v.tag == Mark::Independent;
}

MarkedValue marked_cit(const Dataset& data, const MultiIndex& raw, const HyperConfig& cfg) {
    const MultiIndex q = MultiIndex::make(raw.x, raw.y, raw.z);
    const std::size_t N = data.rows();
    const int dz = static_cast<int>(q.z.size());
    fisher_sigma(N, dz);
    const HyperSet h = hyperparams(N, dz, cfg);
    MarkedValue v;
    v.hom_B = h.hom_B;
    v.weak_B = h.weak_B;
    const auto dof = [&](std::size_t B) { return static_cast<double>(B) - 3.0 - dz; };
    if (dof(h.weak_B) < 2.0 || dof(h.hom_B) < 2.0) {
        v.fallback = true;
        full_test(data, q, cfg.alpha, v);
        return v;
    }
    auto hs = score_series(data, q, h.hom_B);
    QuantileFn qf;
    if (cfg.quantile == QuantileMethod::Bootstrap)
        qf = [&](double beta) { return quantile_lower_bootstrap(data, q, h.hom_B, beta, cfg.n_boot, cfg.seed); };
    v.hom = homogeneity_test(hs, h, qf);
    full_test(data, q, cfg.alpha, v);
    if (!v.hom.reject) return v;
    auto ws = score_series(data, q, h.weak_B);
    v.weak = weak_regime_test(ws, h);
    v.tag = v.weak->independent ? Mark::Regime : Mark::Dependent;
    return v;
}

MarkedValue MarkedCit::operator()(const MultiIndex& raw) {
    const MultiIndex q = MultiIndex::make(raw.x, raw.y, raw.z);
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(q);
        if (it != cache_.end()) return it->second;
    }
    auto v = marked_cit(data_, q, cfg_);
    std::lock_guard lock(mu_);
    return cache_.emplace(q, std::move(v)).first->second;
}

std::map<MultiIndex, MarkedValue> MarkedCit::snapshot() const {
    std::lock_guard lock(mu_);
    return cache_;
}

}  // namespace gld
