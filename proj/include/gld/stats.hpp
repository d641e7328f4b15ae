#pragma once

namespace gld::stats {

double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

// P(K >= k), K ~ Binomial(n, p)
double binom_upper_tail(int n, double p, int k);

}  // namespace gld::stats
