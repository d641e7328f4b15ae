#include "gld/scm_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/beta_distribution.hpp>
#include <boost/random/cauchy_distribution.hpp>
#include <boost/random/laplace_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace gld {

namespace br = boost::random;

namespace {

// boost's uniform_real never terminates on an empty range
double uniform(double lo, double hi, Rng& rng) {
    if (!(hi > lo)) return lo;
    return br::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

void IndicatorMeta::validate() const {
    if (!(ell_min > 0) || !(ell_max >= ell_min)) throw std::invalid_argument("indicator meta: need 0 < ell_min <= ell_max");
    if (!(gamma > 0)) throw std::invalid_argument("indicator meta: gamma must be positive");
    if (!(a_lo > 0 && a_hi < 1 && a_lo <= a_hi)) throw std::invalid_argument("indicator meta: regime fraction range");
}

bool Indicator::nontrivial() const {
    bool on = false, off = false;
    for (auto v : values) (v ? on : off) = true;
    return on && off;
}

double Indicator::off_fraction() const {
    if (values.empty()) return 0.0;
    auto off = std::count(values.begin(), values.end(), 0);
    return static_cast<double>(off) / static_cast<double>(values.size());
}

std::vector<std::size_t> Indicator::runs() const {
    std::vector<std::size_t> out;
    std::uint8_t cur = 1;
    std::size_t len = 0;
    for (auto v : values) {
        if (v != cur) {
            out.push_back(len);
            cur = v;
            len = 0;
        }
        ++len;
    }
    out.push_back(len);
    return out;
}

Indicator Indicator::from_runs(const std::vector<std::size_t>& runs) {
    Indicator ind;
    std::uint8_t cur = 1;
    for (auto len : runs) {
        ind.values.insert(ind.values.end(), len, cur);
        cur ^= 1;
    }
    return ind;
}

const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::Normal: return "normal";
        case NoiseKind::Laplace: return "laplace";
        case NoiseKind::Uniform: return "uniform";
        case NoiseKind::Cauchy: return "cauchy";
        case NoiseKind::Beta: return "beta";
        case NoiseKind::Multimodal: return "multimodal";
        case NoiseKind::Mixed: return "mixed";
    }
    return "?";
}

NoiseKind noise_kind_from_string(const std::string& s) {
    for (auto k : {NoiseKind::Normal, NoiseKind::Laplace, NoiseKind::Uniform, NoiseKind::Cauchy, NoiseKind::Beta,
                   NoiseKind::Multimodal, NoiseKind::Mixed})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown noise kind: " + s);
}

void NoiseSpec::validate() const {
    if (kind == NoiseKind::Mixed) return;
    if (!(param > 0) || !std::isfinite(param)) throw std::invalid_argument("noise: parameter must be positive");
}

std::vector<std::pair<int, int>> ScmSpec::changing_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& c : changing) out.emplace_back(c.from, c.to);
    return out;
}

const EdgeParam& ScmSpec::edge(int from, int to) const {
    for (const auto& e : edges)
        if (e.from == from && e.to == to) return e;
    throw std::out_of_range("scm: no such edge");
}

int legal_slot_count(int n, int mp) {
    int total = 0;
    for (int i = 0; i < n; ++i) total += std::min(i, mp);
    return total;
}

Dag generate_dag(int n, int mp, int budget, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_dag: node_count < 1");
    if (mp < 0) throw std::invalid_argument("generate_dag: max_parents < 0");
    const int legal = legal_slot_count(n, mp);
    if (budget < 0 || budget > legal)
        throw std::invalid_argument("generate_dag: link budget " + std::to_string(budget) + " exceeds " +
                                    std::to_string(legal) + " legal slots");
    auto rng = make_rng(seed, {0x646167});

    // slot s belongs to node owner[s]
    std::vector<int> owner;
    for (int i = 0; i < n; ++i) owner.insert(owner.end(), std::min(i, mp), i);
    std::vector<int> pick(owner.size());
    std::iota(pick.begin(), pick.end(), 0);
    for (int i = 0; i < budget; ++i) {
        br::uniform_int_distribution<int> u(i, static_cast<int>(pick.size()) - 1);
        std::swap(pick[i], pick[u(rng)]);
    }
    std::vector<int> filled(n, 0);
    for (int i = 0; i < budget; ++i) ++filled[owner[pick[i]]];

    Dag ordered(n);
    for (int v = 0; v < n; ++v) {
        std::vector<int> cand(v);
        std::iota(cand.begin(), cand.end(), 0);
        for (int k = 0; k < filled[v]; ++k) {
            br::uniform_int_distribution<int> u(k, v - 1);
            std::swap(cand[k], cand[u(rng)]);
            ordered.add_edge(cand[k], v);
        }
    }

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        br::uniform_int_distribution<int> u(0, i);
        std::swap(perm[i], perm[u(rng)]);
    }
    Dag out(n);
    for (auto [a, b] : ordered.edges()) out.add_edge(perm[a], perm[b]);
    return out;
}

Indicator sample_indicator(std::size_t n, const IndicatorMeta& meta, double a, std::uint64_t seed) {
    meta.validate();
    if (!(a > 0 && a < 1)) throw std::invalid_argument("sample_indicator: a outside (0,1)");
    if (static_cast<double>(n) < 2.0 * meta.ell_min) throw std::invalid_argument("sample_indicator: n < 2 ell_min");
    auto rng = make_rng(seed, {0x696e64});
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double ell = std::exp(uniform(std::log(meta.ell_min), std::log(meta.ell_max), rng));
        br::normal_distribution<double> seg(std::log(ell), meta.gamma);
        br::uniform_real_distribution<double> u01(0.0, 1.0);

        Indicator ind;
        ind.values.assign(n, 0);
        double pos = 0.0;
        std::uint8_t state = 1;
        bool first = true;
        while (pos < static_cast<double>(n)) {
            double len = std::exp(seg(rng));
            if (first) len *= u01(rng);
            first = false;
            len *= state ? 2.0 * (1.0 - a) : 2.0 * a;
            const double end = pos + len;
            auto b = static_cast<std::size_t>(std::llround(pos));
            auto e = std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(std::min(end, double(n)))));
            for (std::size_t t = b; t < e; ++t) ind.values[t] = state;
            pos = end;
            state ^= 1;
        }
        if (ind.nontrivial()) return ind;
    }
    throw std::runtime_error("sample_indicator: retry budget exhausted");
}

namespace {

std::vector<double> draw(NoiseKind kind, double x, std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    switch (kind) {
        case NoiseKind::Normal: {
            br::normal_distribution<double> d(0.0, x);
            for (auto& v : out) v = d(rng);
            break;
        }
        case NoiseKind::Laplace: {
            br::laplace_distribution<double> d(0.0, x);
            for (auto& v : out) v = d(rng);
            break;
        }
        case NoiseKind::Uniform: {
            br::uniform_real_distribution<double> d(-x, x);
            for (auto& v : out) v = d(rng);
            break;
        }
        case NoiseKind::Cauchy: {
            br::cauchy_distribution<double> d(0.0, x);
            for (auto& v : out) v = d(rng);
            break;
        }
        case NoiseKind::Beta: {
            br::beta_distribution<double> d(1.0 / x, 5.0);
            for (auto& v : out) v = d(rng);
            break;
        }
        case NoiseKind::Multimodal: {
            br::normal_distribution<double> d(0.0, 1.0);
            br::bernoulli_distribution<double> coin(0.5);
            for (auto& v : out) v = d(rng) + (coin(rng) ? x : 0.0);
            break;
        }
        case NoiseKind::Mixed: throw std::logic_error("draw: unresolved mixed noise");
    }
    return out;
}

constexpr NoiseKind kPureKinds[] = {NoiseKind::Normal, NoiseKind::Laplace, NoiseKind::Uniform,
                                    NoiseKind::Cauchy, NoiseKind::Beta,    NoiseKind::Multimodal};

NoiseSpec resolve_mixed(const NoiseSpec& s, Rng& rng) {
    if (s.kind != NoiseKind::Mixed) return s;
    br::uniform_int_distribution<int> u(0, 5);
    return {kPureKinds[u(rng)], s.param > 0 ? s.param : 1.0};
}

}  // namespace

std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    auto rng = make_rng(seed, {0x6e6f69});
    NoiseSpec s = resolve_mixed(spec, rng);
    return draw(s.kind, s.param, n, rng);
}

int GenConfig::link_budget() const {
    if (links >= 0) return links;
    return static_cast<int>(std::lround(density * nodes * (nodes - 1) / 2.0));
}

ScmSpec generate_spec(const GenConfig& cfg, std::uint64_t seed) {
    cfg.meta.validate();
    cfg.noise.validate();
    if (!(cfg.coef_min > 0 && cfg.coef_max >= cfg.coef_min)) throw std::invalid_argument("coefficient range");
    ScmSpec s;
    s.seed = seed;
    s.samples = cfg.samples;
    s.dag = generate_dag(cfg.nodes, cfg.max_parents, cfg.link_budget(), seed);

    auto rng = make_rng(seed, {0x636f65});
    br::bernoulli_distribution<double> coin(0.5);
    for (auto [a, b] : s.dag.edges()) {
        double m = std::exp(uniform(std::log(cfg.coef_min), std::log(cfg.coef_max), rng));
        int sign = coin(rng) ? 1 : -1;
        s.edges.push_back({a, b, m, sign});
    }

    auto nrng = make_rng(seed, {0x6e7370});
    for (int v = 0; v < cfg.nodes; ++v) s.noise.push_back(resolve_mixed(cfg.noise, nrng));

    auto edges = s.dag.edges();
    if (cfg.changing < 0 || cfg.changing > static_cast<int>(edges.size()))
        throw std::invalid_argument("generate_spec: more changing links than edges");
    auto crng = make_rng(seed, {0x636867});
    for (int i = 0; i < cfg.changing; ++i) {
        br::uniform_int_distribution<int> u(i, static_cast<int>(edges.size()) - 1);
        std::swap(edges[i], edges[u(crng)]);
    }
    std::vector<std::pair<int, int>> chosen(edges.begin(), edges.begin() + cfg.changing);
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        double a = uniform(cfg.meta.a_lo, cfg.meta.a_hi, crng);
        auto ind = sample_indicator(cfg.samples, cfg.meta, a, crng());
        s.changing.push_back({chosen[i].first, chosen[i].second, std::move(ind)});
    }
    return s;
}

Dataset simulate(const ScmSpec& spec, std::size_t n, std::uint64_t seed) {
    const int k = spec.dag.node_count();
    for (const auto& c : spec.changing)
        if (c.indicator.size() < n) throw std::invalid_argument("simulate: indicator shorter than n");
    auto order = spec.dag.topological_order();
    if (order.empty() && k > 0) throw std::invalid_argument("simulate: cyclic graph");

    Dataset d = Dataset::with_vars(k, n);
    for (int v = 0; v < k; ++v) {
        auto rng = make_rng(seed, {0x73696d, static_cast<std::uint64_t>(v)});
        d.cols[v] = draw(spec.noise.at(v).kind, spec.noise.at(v).param, n, rng);
    }
    for (int v : order) {
        for (int p : spec.dag.parents(v)) {
            const double c = spec.edge(p, v).coef();
            const Indicator* ind = nullptr;
            for (const auto& ch : spec.changing)
                if (ch.from == p && ch.to == v) ind = &ch.indicator;
            auto& xv = d.cols[v];
            const auto& xp = d.cols[p];
            if (ind) {
                for (std::size_t t = 0; t < n; ++t)
                    if (ind->values[t]) xv[t] += c * xp[t];
            } else {
                for (std::size_t t = 0; t < n; ++t) xv[t] += c * xp[t];
            }
        }
    }
    return d;
}

std::vector<Dag> state_dags(const Dag& dag, const std::vector<std::pair<int, int>>& changing) {
    const std::size_t m = changing.size();
    std::vector<Dag> out;
    for (std::size_t s = 0; s < (std::size_t{1} << m); ++s) {
        Dag g = dag;
        for (std::size_t k = 0; k < m; ++k)
            if (!((s >> k) & 1)) g.remove_edge(changing[k].first, changing[k].second);
        out.push_back(std::move(g));
    }
    return out;
}

nlohmann::json to_json(const ScmSpec& s) {
    nlohmann::json edges = nlohmann::json::array(), noise = nlohmann::json::array(),
                   changing = nlohmann::json::array();
    for (const auto& e : s.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"magnitude", e.magnitude}, {"sign", e.sign}});
    for (const auto& n : s.noise) noise.push_back({{"kind", to_string(n.kind)}, {"param", n.param}});
    for (const auto& c : s.changing) changing.push_back({{"from", c.from}, {"to", c.to}, {"runs", c.indicator.runs()}});
    return {{"schema", 1},          {"seed", s.seed},   {"samples", s.samples}, {"nodes", s.dag.node_count()},
            {"edges", edges},       {"noise", noise},   {"changing", changing}};
}

ScmSpec spec_from_json(const nlohmann::json& j) {
    ScmSpec s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.samples = j.at("samples").get<std::size_t>();
    s.dag = Dag(j.at("nodes").get<int>());
    for (const auto& e : j.at("edges")) {
        EdgeParam p{e.at("from").get<int>(), e.at("to").get<int>(), e.at("magnitude").get<double>(),
                    e.at("sign").get<int>()};
        s.dag.add_edge(p.from, p.to);
        s.edges.push_back(p);
    }
    if (!s.dag.acyclic()) throw std::invalid_argument("spec json: cyclic graph");
    std::sort(s.edges.begin(), s.edges.end(),
              [](const EdgeParam& a, const EdgeParam& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    for (const auto& n : j.at("noise"))
        s.noise.push_back({noise_kind_from_string(n.at("kind").get<std::string>()), n.at("param").get<double>()});
    if (static_cast<int>(s.noise.size()) != s.dag.node_count()) throw std::invalid_argument("spec json: noise count");
    for (const auto& c : j.at("changing")) {
        int a = c.at("from").get<int>(), b = c.at("to").get<int>();
        if (!s.dag.has_edge(a, b)) throw std::invalid_argument("spec json: changing edge not in graph");
        s.changing.push_back({a, b, Indicator::from_runs(c.at("runs").get<std::vector<std::size_t>>())});
    }
    return s;
}

nlohmann::json to_json(const GenConfig& c) {
    nlohmann::json j = {{"schema", 1},
                        {"nodes", c.nodes},
                        {"samples", c.samples},
                        {"max_parents", c.max_parents},
                        {"density", c.density},
                        {"changing", c.changing},
                        {"ell_min", c.meta.ell_min},
                        {"ell_max", c.meta.ell_max},
                        {"gamma", c.meta.gamma},
                        {"a_range", {c.meta.a_lo, c.meta.a_hi}},
                        {"coef_range", {c.coef_min, c.coef_max}},
                        {"noise", {{"kind", to_string(c.noise.kind)}, {"param", c.noise.param}}}};
    if (c.links >= 0) j["links"] = c.links;
    return j;
}

GenConfig gen_config_from_json(const nlohmann::json& j) {
    for (const char* key : {"schema", "nodes", "samples"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("config: missing key '") + key + "'");
    if (j.at("schema").get<int>() != 1) throw std::invalid_argument("config: unsupported schema version");
    GenConfig c;
    c.nodes = j.at("nodes").get<int>();
    c.samples = j.at("samples").get<std::size_t>();
    c.max_parents = j.value("max_parents", c.max_parents);
    c.density = j.value("density", c.density);
    c.links = j.value("links", c.links);
    c.changing = j.value("changing", c.changing);
    c.meta.ell_min = j.value("ell_min", c.meta.ell_min);
    c.meta.ell_max = j.value("ell_max", c.meta.ell_max);
    c.meta.gamma = j.value("gamma", c.meta.gamma);
    if (j.contains("a_range")) {
        c.meta.a_lo = j["a_range"].at(0).get<double>();
        c.meta.a_hi = j["a_range"].at(1).get<double>();
    }
    if (j.contains("coef_range")) {
        c.coef_min = j["coef_range"].at(0).get<double>();
        c.coef_max = j["coef_range"].at(1).get<double>();
    }
    if (j.contains("noise")) {
        c.noise.kind = noise_kind_from_string(j["noise"].value("kind", std::string("normal")));
        c.noise.param = j["noise"].value("param", 1.0);
    }
    return c;
}

}  // namespace gld
