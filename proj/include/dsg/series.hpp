#pragma once

#include "dsg/levelindex.hpp"

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace dsg {

// A Dirichlet series sum a_n e^{s lambda_n}, described by the exponents and
// the coefficient norms only. Indices are doubles holding integral values
// so that peaks far beyond 2^53 can still be located.
struct SeriesSpec {
	std::string name;
	std::string family;
	std::map<std::string, double> params;
	// stable identity used for cache keys and reports
	std::string key;

	std::function<double(double)> lambda;   // n >= 1
	std::function<double(double)> log_norm; // -inf marks a vanishing term
	// Optional stable forms of f(i + len) - f(i). Without them the
	// difference of two evaluations is used.
	std::function<double(double, double)> lambda_step;
	std::function<double(double, double)> log_norm_step;

	// term_log(., sigma) is concave in n for every sigma
	bool concave = false;
	// generators fail beyond this index
	double size = std::numeric_limits<double>::infinity();
};

struct SumOptions {
	// allowed effect of the truncated tail on the log of the sum
	double tail_tol = 1e-12;
	// allowed gap between certified upper and lower block sums, relative
	// to the magnitude of the log of the sum
	double rel_tol = 1e-13;
	// enumeration cap for specs without concave structure
	double max_terms = 67108864.0; // 2^26
	int max_doublings = 1020;
};

struct ValidationReport {
	int n_checked = 0;
	bool monotone_ok = false;
	double d_estimate = 0.0;
	double coeff_decay_trend = 0.0;
	enum class Verdict { pass, warn, fail } verdict = Verdict::fail;
	std::string cause;
};

std::string to_string(ValidationReport::Verdict v);

struct MaxTerm {
	double n_star = 1.0;
	ExtReal value;
};

struct SumResult {
	ExtReal log_upper;
	double log_lower = 0.0; // certified lower bound for the same sum
	double tail_bound = 0.0; // log-domain effect of the truncated tail
	double n_star = 1.0;
	long blocks = 0;
};

SeriesSpec expexp_spec(double a, double c);
SeriesSpec table_spec(std::string name, std::vector<double> lambda,
                      std::vector<double> log_norm);

ValidationReport validate(const SeriesSpec &spec, int n_max);

// log ||a_n|| + sigma lambda_n
double term_log(const SeriesSpec &spec, double n, double sigma);
// term_log(i + len) - term_log(i)
double term_step(const SeriesSpec &spec, double i, double len, double sigma);

MaxTerm max_term_log(const SeriesSpec &spec, double sigma, double n_max = 64,
                     const SumOptions &opts = {});

ExtReal log_sum_upper(const SeriesSpec &spec, double sigma, double tail_tol,
                      const SumOptions &opts = {});
SumResult sum_bounds(const SeriesSpec &spec, double sigma,
                     const SumOptions &opts = {});

// lgamma(x + d) - lgamma(x) without cancellation, x >= 1, d >= 0
double lgamma_step(double x, double d);

} // namespace dsg
