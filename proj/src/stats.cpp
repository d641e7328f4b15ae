#include "gld/stats.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace gld::stats {

namespace {
const boost::math::normal_distribution<double> kStd;
}

double norm_pdf(double x) { return boost::math::pdf(kStd, x); }

double norm_cdf(double x) {
    if (x < -38.5) return 0.0;
    if (x > 38.5) return 1.0;
    return boost::math::cdf(kStd, x);
}

double norm_quantile(double p) { return boost::math::quantile(kStd, p); }

double binom_upper_tail(int n, double p, int k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return boost::math::ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

}  // namespace gld::stats
