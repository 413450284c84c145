#include "dsg/series.hpp"

#include "dsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace dsg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

std::uint64_t fnv1a(const void *data, std::size_t n, std::uint64_t h)
{
	auto p = static_cast<const unsigned char *>(data);
	for (std::size_t i = 0; i < n; ++i) {
		h ^= p[i];
		h *= 1099511628211ull;
	}
	return h;
}

double stirling_tail(double y)
{
	double y2 = y * y;
	return 1.0 / (12.0 * y) - 1.0 / (360.0 * y * y2) +
	       1.0 / (1260.0 * y * y2 * y2);
}

// log of sum_{k=0}^{len-1} e^{s k}
double log_geom(double s, double len)
{
	if (len <= 1.0)
		return 0.0;
	if (s == 0.0)
		return std::log(len);
	if (s < 0.0)
		return std::log(-std::expm1(s * len)) - std::log(-std::expm1(s));
	return s * (len - 1.0) + std::log(-std::expm1(-s * len)) -
	       std::log(-std::expm1(-s));
}

// first n whose forward step is not positive; that n maximizes a concave
// sequence
double concave_peak(const SeriesSpec &spec, double sigma, int max_doublings)
{
	auto rising = [&](double n) {
		double d = term_step(spec, n, 1.0, sigma);
		if (std::isnan(d))
			throw SeriesError("term step undefined at n=" + fmt_num(n));
		return d > 0.0;
	};
	if (spec.size <= 1.0 || !rising(1.0))
		return 1.0;
	double lo = 1.0, hi = 2.0;
	int k = 0;
	while (hi < spec.size && rising(hi)) {
		lo = hi;
		hi *= 2.0;
		if (++k > max_doublings || !std::isfinite(hi))
			throw SeriesError("maximum term not found below n=" +
			                  fmt_num(lo));
	}
	hi = std::min(hi, spec.size);
	while (hi - lo > 1.0) {
		double mid = std::floor(lo + (hi - lo) / 2.0);
		if (mid <= lo || mid >= hi)
			break;
		if (rising(mid))
			lo = mid;
		else
			hi = mid;
	}
	return hi;
}

SumResult concave_sum(const SeriesSpec &spec, double sigma,
                      const SumOptions &opts)
{
	SumResult r;
	const double peak = concave_peak(spec, sigma, opts.max_doublings);
	const double top = term_log(spec, peak, sigma);
	r.n_star = peak;
	const double eta =
	    std::expm1(std::min(opts.rel_tol * std::max(1.0, std::abs(top)), 50.0));

	// everything below is relative to the peak term
	std::vector<double> upper{0.0};
	double lower = 1.0;
	double tail = 0.0;
	auto accept = [&](double gap, double lo) {
		return gap <= eta * std::max(lo, lower / 1024.0);
	};

	// right of the peak: the previous chord bounds every later term from
	// above, the block chord bounds the block from below
	{
		double i = peak + 1.0;
		double li = peak < spec.size ? term_step(spec, peak, 1.0, sigma) : 0.0;
		double slope = li;
		double len = 1.0;
		long guard = 0;
		while (i <= spec.size) {
			if (slope < 0.0) {
				double t = std::exp(li) / -std::expm1(slope);
				if (t < opts.tail_tol * lower) {
					upper.push_back(std::log(t));
					tail += t;
					break;
				}
			}
			if (++guard > 200000)
				throw SeriesError("tail ratio not eventually < 1 at n=" +
				                  fmt_num(i));
			len = std::min(len, spec.size - i + 1.0);
			double d = term_step(spec, i, len, sigma);
			double chord = d / len;
			double up = li + log_geom(slope, len);
			double lo = li + log_geom(chord, len);
			if (len > 1.0 && !accept(std::exp(up) - std::exp(lo), std::exp(lo))) {
				len = std::max(1.0, std::floor(len / 2.0));
				continue;
			}
			upper.push_back(up);
			lower += std::exp(lo);
			++r.blocks;
			li += d;
			i += len;
			slope = chord;
			len *= 2.0;
		}
	}

	// left of the peak, walking down to n = 1; blocks cover [i - len + 1, i]
	if (peak > 1.0) {
		double i = peak - 1.0;
		double d0 = term_step(spec, i, 1.0, sigma);
		double li = -d0;
		double slope = d0;
		double len = 1.0;
		while (i >= 1.0) {
			double rest = i * std::exp(li);
			if (rest < opts.tail_tol * lower) {
				upper.push_back(std::log(i) + li);
				tail += rest;
				break;
			}
			if (i == 1.0) {
				upper.push_back(li);
				lower += std::exp(li);
				++r.blocks;
				break;
			}
			len = std::min(len, i - 1.0);
			double d = term_step(spec, i - len, len, sigma);
			double chord = d / len;
			double up = li + log_geom(-slope, len);
			double lo = li + log_geom(-chord, len);
			if (len > 1.0 && !accept(std::exp(up) - std::exp(lo), std::exp(lo))) {
				len = std::max(1.0, std::floor(len / 2.0));
				continue;
			}
			upper.push_back(up);
			lower += std::exp(lo);
			++r.blocks;
			li -= d;
			i -= len;
			slope = chord;
			len *= 2.0;
		}
	}

	r.log_upper = from_real(top + lse_accumulate(upper));
	r.log_lower = top + std::log(lower);
	r.tail_bound = tail / lower;
	return r;
}

struct Scan {
	std::vector<double> logs;
	double best = -kInf;
	double best_n = 1.0;
};

void extend_scan(const SeriesSpec &spec, double sigma, Scan &s, double upto)
{
	for (double n = static_cast<double>(s.logs.size()) + 1.0; n <= upto; n += 1.0) {
		double t = term_log(spec, n, sigma);
		if (std::isnan(t))
			throw SeriesError("term undefined at n=" + fmt_num(n));
		s.logs.push_back(t);
		if (t > s.best) {
			s.best = t;
			s.best_n = n;
		}
	}
}

SumResult enumerated_sum(const SeriesSpec &spec, double sigma,
                         const SumOptions &opts)
{
	SumResult r;
	Scan s;
	double window = std::min(64.0, spec.size);
	for (;;) {
		extend_scan(spec, sigma, s, window);
		if (window >= spec.size) {
			r.tail_bound = 0.0;
			break;
		}
		bool interior = s.best_n < window;
		// last two finite terms give the ratio used for the tail bound
		double last = -kInf, prev = -kInf;
		for (auto it = s.logs.rbegin(); it != s.logs.rend(); ++it) {
			if (!std::isfinite(*it))
				continue;
			if (last == -kInf)
				last = *it;
			else {
				prev = *it;
				break;
			}
		}
		if (interior && last == -kInf) {
			r.tail_bound = 0.0;
			break;
		}
		if (interior && prev > -kInf && last < prev) {
			double step = last - prev;
			double log_tail = last + step - std::log(-std::expm1(step));
			double total = lse_accumulate(s.logs);
			double effect = std::exp(log_tail - total);
			if (effect < opts.tail_tol) {
				s.logs.push_back(log_tail);
				r.tail_bound = effect;
				break;
			}
		}
		if (window >= opts.max_terms)
			throw SeriesError("tail ratio not eventually < 1 at n=" +
			                  fmt_num(window));
		window = std::min(window * 2.0, spec.size);
	}
	r.n_star = s.best_n;
	double total = lse_accumulate(s.logs);
	r.log_upper = from_real(total);
	r.log_lower = total - std::log1p(r.tail_bound);
	r.blocks = static_cast<long>(s.logs.size());
	return r;
}

} // namespace

std::string to_string(ValidationReport::Verdict v)
{
	switch (v) {
	case ValidationReport::Verdict::pass:
		return "pass";
	case ValidationReport::Verdict::warn:
		return "warn";
	default:
		return "fail";
	}
}

double lgamma_step(double x, double d)
{
	if (d == 0.0)
		return 0.0;
	if (d == 1.0)
		return std::log(x);
	if (x < 64.0)
		return std::lgamma(x + d) - std::lgamma(x);
	double y = x + d;
	return (x - 0.5) * std::log1p(d / x) + d * std::log(y) - d +
	       (stirling_tail(y) - stirling_tail(x));
}

SeriesSpec expexp_spec(double a, double c)
{
	if (!(a > 0.0) || !(c > 0.0))
		throw InvalidInput("expexp: a and c must be positive");
	SeriesSpec s;
	s.family = "expexp";
	s.params = {{"a", a}, {"c", c}};
	s.key = "expexp:a=" + fmt_num(a) + ",c=" + fmt_num(c);
	s.name = s.key;
	const double lc = std::log(c);
	s.lambda = [a](double n) { return a * n; };
	s.lambda_step = [a](double, double len) { return a * len; };
	s.log_norm = [lc](double n) { return n * lc - std::lgamma(n + 1.0); };
	s.log_norm_step = [lc](double i, double len) {
		return len * lc - lgamma_step(i + 1.0, len);
	};
	s.concave = true;
	return s;
}

SeriesSpec table_spec(std::string name, std::vector<double> lambda,
                      std::vector<double> log_norm)
{
	if (lambda.empty() || lambda.size() != log_norm.size())
		throw InvalidInput("table: lambda and log_norm must be non-empty and "
		                   "of equal length");
	SeriesSpec s;
	s.family = "table";
	s.name = std::move(name);
	std::uint64_t h = 1469598103934665603ull;
	h = fnv1a(lambda.data(), lambda.size() * sizeof(double), h);
	h = fnv1a(log_norm.data(), log_norm.size() * sizeof(double), h);
	char buf[24];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	s.key = "table:" + s.name + ":" + buf;
	s.size = static_cast<double>(lambda.size());
	auto at = [](const std::vector<double> &v, double n) {
		if (n < 1.0 || n > static_cast<double>(v.size()) || n != std::floor(n))
			throw SeriesError("table index " + fmt_num(n) +
			                  " outside 1.." + std::to_string(v.size()));
		return v[static_cast<std::size_t>(n) - 1];
	};
	s.lambda = [at, lambda = std::move(lambda)](double n) { return at(lambda, n); };
	s.log_norm = [at, log_norm = std::move(log_norm)](double n) {
		return at(log_norm, n);
	};
	return s;
}

ValidationReport validate(const SeriesSpec &spec, int n_max)
{
	if (n_max < 16)
		throw InvalidInput("validate: n_max must be at least 16");
	ValidationReport rep;
	std::vector<double> lam, ratio;
	try {
		for (int n = 1; n <= n_max; ++n) {
			double l = spec.lambda(n);
			double c = spec.log_norm(n);
			if (!std::isfinite(l) || std::isnan(c))
				throw SeriesError("non-finite generator value at n=" +
				                  std::to_string(n));
			lam.push_back(l);
			ratio.push_back(c / l);
		}
	} catch (const std::exception &e) {
		rep.n_checked = static_cast<int>(lam.size());
		rep.cause = e.what();
		rep.verdict = ValidationReport::Verdict::fail;
		return rep;
	}
	rep.n_checked = n_max;
	rep.monotone_ok = lam[0] > 0.0;
	for (int i = 1; i < n_max && rep.monotone_ok; ++i)
		rep.monotone_ok = lam[i] > lam[i - 1];
	if (rep.monotone_ok) {
		for (int i = 0; i < n_max; ++i)
			rep.d_estimate = std::max(rep.d_estimate, std::log(i + 1.0) / lam[i]);
	}

	// least-squares slope of log||a_n|| / lambda_n over the second half
	double sx = 0, sy = 0, sxx = 0, sxy = 0;
	int m = 0, vanishing = 0;
	for (int i = n_max / 2; i < n_max; ++i) {
		if (!std::isfinite(ratio[i])) {
			++vanishing;
			continue;
		}
		double x = i + 1.0;
		sx += x;
		sy += ratio[i];
		sxx += x * x;
		sxy += x * ratio[i];
		++m;
	}
	if (m >= 2) {
		double den = m * sxx - sx * sx;
		rep.coeff_decay_trend = (m * sxy - sx * sy) / den;
	}
	bool decays = m >= 2 ? rep.coeff_decay_trend < 0.0 : vanishing > 0;
	if (!rep.monotone_ok) {
		rep.verdict = ValidationReport::Verdict::fail;
		rep.cause = "exponents not strictly increasing from a positive start";
	} else if (!decays) {
		rep.verdict = ValidationReport::Verdict::fail;
		rep.cause = "log||a_n||/lambda_n is not decreasing";
	} else if (vanishing > m) {
		rep.verdict = ValidationReport::Verdict::warn;
		rep.cause = "most checked coefficients vanish";
	} else {
		rep.verdict = ValidationReport::Verdict::pass;
	}
	return rep;
}

double term_log(const SeriesSpec &spec, double n, double sigma)
{
	if (n < 1.0)
		throw InvalidInput("term_log: n must be >= 1");
	return spec.log_norm(n) + sigma * spec.lambda(n);
}

double term_step(const SeriesSpec &spec, double i, double len, double sigma)
{
	double dl = spec.lambda_step ? spec.lambda_step(i, len)
	                             : spec.lambda(i + len) - spec.lambda(i);
	double dn = spec.log_norm_step ? spec.log_norm_step(i, len)
	                               : spec.log_norm(i + len) - spec.log_norm(i);
	return dn + sigma * dl;
}

MaxTerm max_term_log(const SeriesSpec &spec, double sigma, double n_max,
                     const SumOptions &opts)
{
	if (spec.concave) {
		double n = concave_peak(spec, sigma, opts.max_doublings);
		return {n, from_real(term_log(spec, n, sigma))};
	}
	Scan s;
	double window = std::min(std::max(n_max, 1.0), spec.size);
	for (;;) {
		extend_scan(spec, sigma, s, window);
		if (s.best_n < window || window >= spec.size)
			break;
		if (window >= opts.max_terms)
			throw SeriesError("maximum term still at the window edge n=" +
			                  fmt_num(window));
		window = std::min(window * 2.0, spec.size);
	}
	if (!std::isfinite(s.best))
		throw SeriesError("all checked terms vanish");
	return {s.best_n, from_real(s.best)};
}

SumResult sum_bounds(const SeriesSpec &spec, double sigma,
                     const SumOptions &opts)
{
	if (!(opts.tail_tol > 0.0))
		throw InvalidInput("tail_tol must be positive");
	return spec.concave ? concave_sum(spec, sigma, opts)
	                    : enumerated_sum(spec, sigma, opts);
}

ExtReal log_sum_upper(const SeriesSpec &spec, double sigma, double tail_tol,
                      const SumOptions &opts)
{
	SumOptions o = opts;
	o.tail_tol = tail_tol;
	return sum_bounds(spec, sigma, o).log_upper;
}

} // namespace dsg
