#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "gld/blocks_score.hpp"
#include "gld/dataset.hpp"
#include "gld/graph_core.hpp"

namespace gld {

enum class Mark { Independent, Dependent, Regime };

const char* to_string(Mark m);

enum class RegimePrior { Generic, Large };

enum class QuantileMethod { Analytic, Bootstrap };

struct HyperConfig {
    RegimePrior prior = RegimePrior::Generic;
    double alpha = 0.05;
    double alpha_weak = 0.05;
    double beta0 = 0.1;
    int n0_min = 5;
    // > 0: raise n0_min to the alpha_weak quantile of cut-off counts in a regime of this share
    double a_min = 0.0;
    QuantileMethod quantile = QuantileMethod::Analytic;
    int n_boot = 500;
    std::uint64_t seed = 0;

    // "generic", "large", "generic-weak20", "large-weak20"
    static HyperConfig preset(const std::string& name);
};

struct HyperSet {
    HyperConfig cfg;
    std::size_t N = 0;
    int z_dim = 0;
    std::size_t hom_B = 0;
    std::size_t weak_B = 0;
    double c = 0.0;
    int n0_min = 5;
};

// alpha-quantile of K ~ Binomial(round(a_min * theta), Phi(c / sigma_B)): smallest n with P(K <= n) >= alpha
int binomial_n0_min(int theta, double a_min, double c, double sigma_B, double alpha);

HyperSet hyperparams(std::size_t N, int z_dim, RegimePrior prior);
HyperSet hyperparams(std::size_t N, int z_dim, const HyperConfig& cfg);

// E[X | X <= c] for X ~ N(mu, sigma^2)
double trunc_normal_mean(double mu, double sigma, double c);

double quantile_lower_analytic(const ScoreSeries& s, double beta);
double quantile_lower_bootstrap(const Dataset& data, const MultiIndex& q, std::size_t B, double beta,
                                int n_boot, std::uint64_t seed);

struct HomogeneityResult {
    bool decided = false;
    bool reject = false;
    double p0 = 1.0;
    double beta = 0.0;
    double q = 0.0;
    int k = 0;
    int k0 = 0;
    int theta = 0;
};

// smallest k with P(K >= k) < alpha under Binomial(theta, beta0); theta + 1 if none
int rejection_count(int theta, double beta0, double alpha);
// largest beta >= beta0 with P(K >= k0) < alpha
double enlarge_beta(int theta, int k0, double alpha, double beta0);
// P(K >= k) under Binomial(theta, beta)
double homogeneity_p_value(int theta, double beta, int k);

using QuantileFn = std::function<double(double beta)>;

HomogeneityResult homogeneity_test(const ScoreSeries& s, const HyperSet& h, const QuantileFn& quantile = {});

struct WeakResult {
    bool independent = false;
    bool flipped = false;
    int n_c = 0;
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

double acceptance_halfwidth(double sigma_B, double alpha_weak, int n_c);

WeakResult weak_regime_test(const ScoreSeries& s, const HyperSet& h);

struct MarkedValue {
    Mark tag = Mark::Independent;
    bool fallback = false;
    HomogeneityResult hom;
    std::optional<WeakResult> weak;
    double z_full = 0.0;
    double sigma_full = 0.0;
    double p_full = 1.0;
    std::size_t hom_B = 0;
    std::size_t weak_B = 0;

    nlohmann::json diagnostics() const;
};

MarkedValue marked_cit(const Dataset& data, const MultiIndex& q, const HyperConfig& cfg);

// two-sided full-data Fisher z test; true when independent
bool fisher_z_independent(const Dataset& data, const MultiIndex& q, double alpha);

// memoized marked test on one dataset; safe for concurrent callers
class MarkedCit {
public:
    MarkedCit(const Dataset& data, HyperConfig cfg) : data_(data), cfg_(cfg) {}

    MarkedValue operator()(const MultiIndex& q);
    Mark tag(const MultiIndex& q) { return (*this)(q).tag; }

    std::map<MultiIndex, MarkedValue> snapshot() const;
    const HyperConfig& config() const { return cfg_; }
    const Dataset& data() const { return data_; }

private:
    const Dataset& data_;
    HyperConfig cfg_;
    mutable std::mutex mu_;
    std::map<MultiIndex, MarkedValue> cache_;
};

}  // namespace gld
