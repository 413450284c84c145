#include "catch_amalgamated.hpp"

#include "dsg/errors.hpp"
#include "dsg/levelindex.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace dsg;
using Catch::Approx;

namespace {

// value of a representation computed straight from the definition
double tower(int level, double m)
{
	for (int i = 0; i < level; ++i)
		m = std::exp(m);
	return m;
}

bool normalized(const ExtReal &x)
{
	if (x.level == 0)
		return x.mantissa < std::numbers::e;
	return x.mantissa >= 1.0 && x.mantissa < std::numbers::e;
}

ExtReal random_ext(std::mt19937_64 &rng)
{
	std::uniform_int_distribution<int> lv(0, 6);
	std::uniform_real_distribution<double> m(1.0, std::numbers::e);
	std::uniform_real_distribution<double> low(-50.0, std::numbers::e);
	int level = lv(rng);
	if (level == 0) {
		double v = low(rng);
		return ExtReal{0, v < std::numbers::e ? v : 0.0};
	}
	double v = m(rng);
	return ExtReal{level, v < std::numbers::e ? v : 1.0};
}

} // namespace

TEST_CASE("from_real")
{
	auto a = from_real(2.0);
	CHECK(a.level == 0);
	CHECK(a.mantissa == 2.0);

	auto b = from_real(100.0);
	CHECK(b.level == 2);
	CHECK(b.mantissa == Approx(std::log(std::log(100.0))).epsilon(1e-15));
	CHECK(b.mantissa == Approx(1.52718).epsilon(1e-5));

	auto c = from_real(std::numbers::e);
	CHECK(c.level == 1);
	CHECK(c.mantissa == Approx(1.0).epsilon(1e-15));

	CHECK(from_real(-1e300).level == 0);
	CHECK_THROWS_AS(from_real(std::nan("")), InvalidInput);
}

TEST_CASE("to_real")
{
	CHECK(to_real(ExtReal{0, -7.5}) == -7.5);
	CHECK(to_real(ExtReal{2, 1.52718}) ==
	      Approx(std::exp(std::exp(1.52718))).epsilon(1e-12));
	CHECK(to_real(from_real(100.0)) == Approx(100.0).epsilon(1e-12));
	CHECK_THROWS_AS(to_real(ExtReal{9, 1.4}), OverflowError);
	CHECK_FALSE(try_real(ExtReal{9, 1.4}).has_value());
}

TEST_CASE("log_iter")
{
	CHECK(log_iter(ExtReal{3, 1.2}, 2) == ExtReal{1, 1.2});
	auto h = from_real(100.0);
	auto l = log_iter(h, 1);
	CHECK(l.level == 1);
	CHECK(to_real(l) == Approx(std::log(100.0)).epsilon(1e-14));
	CHECK(log_iter(h, 0) == h);
	CHECK_THROWS_AS(log_iter(ExtReal{0, -1.0}, 1), DomainError);
	// log 0.5 < 0, so a second log is out of domain
	CHECK_THROWS_AS(log_iter(ExtReal{0, 0.5}, 2), DomainError);
}

TEST_CASE("exp_iter")
{
	CHECK(exp_iter(ExtReal{2, 1.5}, 1) == ExtReal{3, 1.5});
	CHECK(exp_iter(ExtReal{0, 0.0}, 1) == ExtReal{0, 1.0});
	auto s = exp_iter(ExtReal{0, 2.0}, 1);
	CHECK(s == ExtReal{1, 2.0});
	CHECK(to_real(s) == Approx(std::exp(2.0)).epsilon(1e-15));
	CHECK(iter_log(ExtReal{0, 2.0}, -1) == s);
}

TEST_CASE("compare")
{
	CHECK(compare(ExtReal{2, 1.5}, ExtReal{1, 2.7}) > 0);
	auto three = from_real(3.0);
	CHECK(three.level == 1);
	CHECK(three.mantissa == Approx(1.0986).epsilon(1e-4));
	CHECK(compare(three, ExtReal{1, 1.2}) < 0);
	CHECK(compare(three, three) == 0);
	CHECK(ExtReal{0, -5.0} < ExtReal{0, 2.0});
}

TEST_CASE("lse_accumulate")
{
	std::vector<double> two{0.0, 0.0};
	CHECK(lse_accumulate(two) == Approx(std::log(2.0)).epsilon(1e-15));

	std::vector<double> tiny{0.0, -1e308};
	CHECK(lse_accumulate(tiny) == 0.0);

	std::vector<double> fact;
	double brute = 0.0;
	double f = 1.0;
	for (int n = 1; n <= 20; ++n) {
		fact.push_back(-std::lgamma(n + 1.0));
		f /= n;
		brute += f;
	}
	CHECK(lse_accumulate(fact) == Approx(std::log(brute)).epsilon(1e-14));
	CHECK(lse_accumulate(fact) == Approx(0.541325).epsilon(1e-6));

	// order of arrival does not matter beyond rounding
	std::vector<double> rev(fact.rbegin(), fact.rend());
	CHECK(lse_accumulate(rev) == Approx(lse_accumulate(fact)).epsilon(1e-15));

	std::vector<double> none;
	CHECK_THROWS_AS(lse_accumulate(none), InvalidInput);
}

TEST_CASE("pow_scale")
{
	auto sq = pow_scale(ExtReal{1, 1.0}, 2.0);
	CHECK(sq.level == 1);
	CHECK(sq.mantissa == Approx(2.0).epsilon(1e-15));
	CHECK(to_real(sq) == Approx(7.389056).epsilon(1e-6));

	ExtReal x{4, 1.3};
	CHECK(pow_scale(x, 1.0) == x);
	CHECK(pow_scale(x, 0.0) == ExtReal{0, 1.0});
	CHECK_THROWS_AS(pow_scale(ExtReal{0, 0.0}, 2.0), DomainError);
	CHECK_THROWS_AS(pow_scale(ExtReal{0, -3.0}, 2.0), DomainError);

	// (e^e^e^1.3)^2 = e^(2 e^e^1.3): one level down is e^e^1.3 + log 2
	auto big = pow_scale(ExtReal{3, 1.3}, 2.0);
	double lhs = to_real(log_iter(big, 1));
	double rhs = 2.0 * std::exp(std::exp(1.3));
	CHECK(lhs == Approx(rhs).epsilon(1e-13));

	CHECK(to_real(pow_scale(from_real(10.0), 0.5)) ==
	      Approx(std::sqrt(10.0)).epsilon(1e-14));
	CHECK(to_real(pow_scale(from_real(0.25), -0.5)) ==
	      Approx(2.0).epsilon(1e-14));
}

TEST_CASE("quotient")
{
	CHECK(quotient(from_real(6.0), from_real(3.0)) == Approx(2.0));
	// e^800 / e^799 = e, both beyond the double range
	ExtReal a = exp_iter(from_real(800.0), 1);
	ExtReal b = exp_iter(from_real(799.0), 1);
	CHECK_FALSE(try_real(a).has_value());
	CHECK(quotient(a, b) == Approx(std::numbers::e).epsilon(1e-12));
	CHECK(quotient(ExtReal{5, 2.0}, from_real(2.0)) ==
	      std::numeric_limits<double>::infinity());
	CHECK(quotient(from_real(2.0), ExtReal{5, 2.0}) == 0.0);
	CHECK_THROWS_AS(quotient(from_real(2.0), from_real(0.0)), DomainError);
}

TEST_CASE("add_real and mul_real")
{
	CHECK(to_real(add_real(from_real(100.0), 5.0)) == Approx(105.0));
	ExtReal huge{3, 2.0}; // e^(e^(e^2)) ~ e^1618
	ExtReal more = add_real(huge, 1e300);
	CHECK(compare(more, huge) >= 0);
	ExtReal twice = mul_real(huge, 2.0);
	CHECK(to_real(log_iter(twice, 1)) ==
	      Approx(std::exp(std::exp(2.0)) + std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("round trip property")
{
	std::mt19937_64 rng(20261016);
	std::uniform_real_distribution<double> u(-1e6, 1e6);
	int failures = 0;
	for (int i = 0; i < 100000; ++i) {
		double v = u(rng);
		ExtReal x = from_real(v);
		if (!normalized(x))
			++failures;
		double back = to_real(x);
		if (std::abs(back - v) > 1e-12 * std::max(1.0, std::abs(v)))
			++failures;
	}
	CHECK(failures == 0);
}

TEST_CASE("level identity property")
{
	std::mt19937_64 rng(7);
	std::uniform_int_distribution<int> kd(0, 5);
	int failures = 0;
	int tried = 0;
	for (int i = 0; i < 100000; ++i) {
		ExtReal x = random_ext(rng);
		int k = kd(rng);
		ExtReal l;
		try {
			l = log_iter(x, k);
		} catch (const DomainError &) {
			continue;
		}
		++tried;
		ExtReal back = exp_iter(l, k);
		if (back.level != x.level)
			++failures;
		else if (std::abs(back.mantissa - x.mantissa) >
		         k * 1e-14 * std::abs(x.mantissa) + 1e-300)
			++failures;
	}
	CHECK(tried > 50000);
	CHECK(failures == 0);
}

TEST_CASE("order embedding property")
{
	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> u(-1e6, 1e6);
	int failures = 0;
	for (int i = 0; i < 100000; ++i) {
		double a = u(rng), b = u(rng), c = u(rng);
		if (a == b)
			continue;
		double lo = std::min(a, b), hi = std::max(a, b);
		if (compare(from_real(lo), from_real(hi)) >= 0)
			++failures;
		ExtReal xa = from_real(a), xb = from_real(b), xc = from_real(c);
		if (xa <= xb && xb <= xc && !(xa <= xc))
			++failures;
	}
	CHECK(failures == 0);
}

TEST_CASE("monotonicity property")
{
	std::mt19937_64 rng(13);
	std::uniform_int_distribution<int> kd(1, 4);
	int failures = 0;
	for (int i = 0; i < 100000; ++i) {
		ExtReal x = random_ext(rng), y = random_ext(rng);
		if (compare(x, y) == 0)
			continue;
		if (compare(x, y) > 0)
			std::swap(x, y);
		int k = kd(rng);
		if (!(exp_iter(x, k) <= exp_iter(y, k)))
			++failures;
		try {
			if (!(log_iter(x, k) <= log_iter(y, k)))
				++failures;
		} catch (const DomainError &) {
		}
	}
	CHECK(failures == 0);
}

TEST_CASE("tower oracle agreement")
{
	std::mt19937_64 rng(17);
	std::uniform_real_distribution<double> m(1.0, std::numbers::e);
	for (int i = 0; i < 1000; ++i) {
		double v = m(rng);
		for (int level = 0; level <= 3; ++level) {
			ExtReal x{level, v};
			double t = tower(level, v);
			if (std::isfinite(t))
				CHECK(to_real(x) == Approx(t).epsilon(1e-15));
		}
	}
}
