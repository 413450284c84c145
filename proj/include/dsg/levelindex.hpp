#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>

namespace dsg {

// A number stored as exp^[level](mantissa).
// level 0 holds any value below e verbatim (negatives included); for
// level >= 1 the mantissa lies in [1, e), so every value has one encoding
// and (level, mantissa) order is value order.
struct ExtReal {
	int level = 0;
	double mantissa = 0.0;

	friend bool operator==(const ExtReal &, const ExtReal &) = default;
};

ExtReal from_real(double v);

// Throws OverflowError when the value exceeds the double range.
double to_real(const ExtReal &x);
std::optional<double> try_real(const ExtReal &x);

// log^[k] x; DomainError when an intermediate value is <= 0.
ExtReal log_iter(const ExtReal &x, int k);
ExtReal exp_iter(const ExtReal &x, int k);

// log^[k] for k >= 0 and exp^[-k] for k < 0.
ExtReal iter_log(const ExtReal &x, int k);

std::strong_ordering compare(const ExtReal &x, const ExtReal &y);

inline std::strong_ordering operator<=>(const ExtReal &x, const ExtReal &y)
{
	return compare(x, y);
}

// log(sum exp(t_i)), accumulated against the running maximum.
// Terms equal to -inf are skipped.
double lse_accumulate(std::span<const double> terms);

// x^alpha, computed as exp(alpha * log x) without leaving the extended domain.
ExtReal pow_scale(const ExtReal &x, double alpha);

// z + d and alpha * z for alpha > 0
ExtReal add_real(const ExtReal &z, double d);
ExtReal mul_real(const ExtReal &z, double alpha);

// x / y as a double; +inf or 0 when the quotient leaves the double range.
// Requires y > 0.
double quotient(const ExtReal &x, const ExtReal &y);

std::string to_string(const ExtReal &x);

} // namespace dsg
