#include "dsg/levelindex.hpp"

#include "dsg/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dsg {

namespace {

constexpr double kE = std::numbers::e;

// upper band edge; anything at or above moves up one level
bool in_band(double m) { return m < kE; }

} // namespace

ExtReal from_real(double v)
{
	if (!std::isfinite(v))
		throw InvalidInput("from_real: non-finite input");
	ExtReal x{0, v};
	while (!in_band(x.mantissa)) {
		x.mantissa = std::log(x.mantissa);
		++x.level;
		// rounding of log(e) may land just below 1
		if (x.mantissa < 1.0)
			x.mantissa = 1.0;
	}
	return x;
}

std::optional<double> try_real(const ExtReal &x)
{
	double v = x.mantissa;
	for (int i = 0; i < x.level; ++i) {
		v = std::exp(v);
		if (!std::isfinite(v))
			return std::nullopt;
	}
	return v;
}

double to_real(const ExtReal &x)
{
	auto v = try_real(x);
	if (!v)
		throw OverflowError("to_real: " + to_string(x) +
		                    " exceeds the double range");
	return *v;
}

ExtReal log_iter(const ExtReal &x, int k)
{
	if (k < 0)
		throw InvalidInput("log_iter: negative iteration count");
	ExtReal r = x;
	for (int i = 0; i < k; ++i) {
		if (r.level > 0) {
			--r.level;
			continue;
		}
		if (r.mantissa <= 0.0)
			throw DomainError("log_iter: log of non-positive value " +
			                  to_string(r));
		r.mantissa = std::log(r.mantissa);
	}
	return r;
}

ExtReal exp_iter(const ExtReal &x, int k)
{
	if (k < 0)
		throw InvalidInput("exp_iter: negative iteration count");
	ExtReal r = x;
	for (int i = 0; i < k; ++i) {
		if (r.level > 0) {
			++r.level;
		} else if (r.mantissa >= 1.0) {
			r.level = 1;
		} else {
			r = from_real(std::exp(r.mantissa));
		}
	}
	return r;
}

ExtReal iter_log(const ExtReal &x, int k)
{
	return k >= 0 ? log_iter(x, k) : exp_iter(x, -k);
}

std::strong_ordering compare(const ExtReal &x, const ExtReal &y)
{
	if (x.level != y.level)
		return x.level <=> y.level;
	if (x.mantissa < y.mantissa)
		return std::strong_ordering::less;
	if (x.mantissa > y.mantissa)
		return std::strong_ordering::greater;
	return std::strong_ordering::equal;
}

double lse_accumulate(std::span<const double> terms)
{
	double m = -std::numeric_limits<double>::infinity();
	double s = 0.0;
	for (double t : terms) {
		if (std::isnan(t))
			throw InvalidInput("lse_accumulate: NaN term");
		if (t == -std::numeric_limits<double>::infinity())
			continue;
		if (t <= m) {
			s += std::exp(t - m);
		} else {
			s = s * std::exp(m - t) + 1.0;
			m = t;
		}
	}
	if (s == 0.0)
		throw InvalidInput("lse_accumulate: no finite terms");
	return m + std::log(s);
}

ExtReal add_real(const ExtReal &z, double d)
{
	if (d == 0.0)
		return z;
	if (auto v = try_real(z))
		return from_real(*v + d);
	// z > DBL_MAX, so |d / z| < 1
	ExtReal lz = log_iter(z, 1);
	auto lzr = try_real(lz);
	if (!lzr)
		return z;
	double ratio = d * std::exp(-*lzr);
	if (ratio == 0.0)
		return z;
	return exp_iter(add_real(lz, std::log1p(ratio)), 1);
}

ExtReal mul_real(const ExtReal &z, double alpha)
{
	if (alpha <= 0.0)
		throw InvalidInput("mul_real: factor must be positive");
	if (alpha == 1.0)
		return z;
	if (z.level == 0)
		return from_real(alpha * z.mantissa);
	return exp_iter(add_real(log_iter(z, 1), std::log(alpha)), 1);
}

ExtReal pow_scale(const ExtReal &x, double alpha)
{
	if (!std::isfinite(alpha))
		throw InvalidInput("pow_scale: non-finite exponent");
	if (x.level == 0 && x.mantissa <= 0.0)
		throw DomainError("pow_scale: non-positive base " + to_string(x));
	if (alpha == 1.0)
		return x;
	if (alpha == 0.0)
		return ExtReal{0, 1.0};
	ExtReal lx = log_iter(x, 1);
	if (lx.level == 0)
		return exp_iter(from_real(alpha * lx.mantissa), 1);
	if (alpha > 0.0)
		return exp_iter(mul_real(lx, alpha), 1);
	// x beyond e^e and alpha < 0: the power underflows
	return ExtReal{0, 0.0};
}

double quotient(const ExtReal &x, const ExtReal &y)
{
	if (y.level == 0 && y.mantissa <= 0.0)
		throw DomainError("quotient: non-positive divisor " + to_string(y));
	auto xv = try_real(x);
	auto yv = try_real(y);
	if (xv && yv) {
		double q = *xv / *yv;
		if (std::isfinite(q))
			return q;
	}
	if (x.level == 0 && x.mantissa <= 0.0) {
		// non-positive numerator over a huge divisor
		return xv && !yv ? -0.0 : -std::numeric_limits<double>::infinity();
	}
	ExtReal lx = log_iter(x, 1);
	ExtReal ly = log_iter(y, 1);
	auto lxv = try_real(lx);
	auto lyv = try_real(ly);
	if (lxv && lyv)
		return std::exp(*lxv - *lyv);
	return compare(lx, ly) > 0 ? std::numeric_limits<double>::infinity()
	                           : 0.0;
}

std::string to_string(const ExtReal &x)
{
	std::ostringstream os;
	os.precision(17);
	os << "(" << x.level << ", " << x.mantissa << ")";
	return os.str();
}

} // namespace dsg
