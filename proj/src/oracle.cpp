#include "dsg/oracle.hpp"

#include "dsg/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace dsg {

double TailSequence::at(std::size_t n) const
{
	if (n < transient.size())
		return transient[n];
	return cycle[(n - transient.size()) % cycle.size()];
}

std::pair<double, double> exact_limits(const TailSequence &s)
{
	if (s.cycle.empty())
		throw InvalidInput("eventually periodic sequence needs a non-empty cycle");
	auto [lo, hi] = std::minmax_element(s.cycle.begin(), s.cycle.end());
	return {*hi, *lo};
}

TailSequence difference(const TailSequence &a, const TailSequence &b)
{
	if (a.cycle.empty() || b.cycle.empty())
		throw InvalidInput("eventually periodic sequence needs a non-empty cycle");
	std::size_t t = std::max(a.transient.size(), b.transient.size());
	std::size_t len = std::lcm(a.cycle.size(), b.cycle.size());
	TailSequence d;
	for (std::size_t n = 0; n < t; ++n)
		d.transient.push_back(a.at(n) - b.at(n));
	for (std::size_t n = t; n < t + len; ++n)
		d.cycle.push_back(a.at(n) - b.at(n));
	return d;
}

int DifferenceReport::violations() const
{
	int v = 0;
	for (const auto &r : rules)
		v += r.holds ? 0 : 1;
	return v + (collapse_holds ? 0 : 1);
}

DifferenceReport check_difference_rules(const TailSequence &a,
                                        const TailSequence &b)
{
	auto [sup_a, inf_a] = exact_limits(a);
	auto [sup_b, inf_b] = exact_limits(b);
	auto [sup_d, inf_d] = exact_limits(difference(a, b));

	DifferenceReport r;
	r.limsup_diff = sup_d;
	r.liminf_diff = inf_d;
	auto ge = [&](std::string name, double lhs, double rhs) {
		r.rules.push_back({std::move(name), lhs, rhs, lhs - rhs, lhs >= rhs});
	};
	ge("liminf(A-B) >= liminf A - limsup B", inf_d, inf_a - sup_b);
	ge("limsup A - liminf B >= limsup(A-B)", sup_a - inf_b, sup_d);
	ge("min{liminf A - liminf B, limsup A - limsup B} >= liminf(A-B)",
	   std::min(inf_a - inf_b, sup_a - sup_b), inf_d);
	ge("limsup(A-B) >= max{liminf A - liminf B, limsup A - limsup B}", sup_d,
	   std::max(inf_a - inf_b, sup_a - sup_b));

	if (sup_b == inf_b) {
		r.collapse_checked = true;
		r.collapse_holds = inf_d == inf_a - inf_b && sup_d == sup_a - sup_b;
	}
	return r;
}

namespace {

std::string describe(const TailSequence &s)
{
	std::ostringstream os;
	os.precision(17);
	os << "[";
	for (std::size_t i = 0; i < s.transient.size(); ++i)
		os << (i ? "," : "") << s.transient[i];
	os << "|";
	for (std::size_t i = 0; i < s.cycle.size(); ++i)
		os << (i ? "," : "") << s.cycle[i];
	os << "]";
	return os.str();
}

} // namespace

SweepResult oracle_sweep(const SweepOptions &opts)
{
	if (opts.instances < 0 || opts.max_transient < 0 || opts.max_cycle < 1 ||
	    !(opts.bound > 0))
		throw InvalidInput("oracle sweep: bad generation limits");
	std::mt19937_64 rng(opts.seed);
	std::uniform_int_distribution<int> tlen(0, opts.max_transient);
	std::uniform_int_distribution<int> clen(1, opts.max_cycle);
	std::uniform_real_distribution<double> val(-opts.bound, opts.bound);
	auto draw = [&] {
		TailSequence s;
		s.transient.resize(tlen(rng));
		for (double &x : s.transient)
			x = val(rng);
		s.cycle.resize(clen(rng));
		for (double &x : s.cycle)
			x = val(rng);
		return s;
	};

	SweepResult res;
	for (int i = 0; i < opts.instances; ++i) {
		TailSequence a = draw(), b = draw();
		// every eighth instance exercises the constant-B collapse
		if (i % 8 == 7)
			b.cycle.assign(b.cycle.size(), b.cycle.front());
		DifferenceReport r = check_difference_rules(a, b);
		++res.instances;
		res.collapse_cases += r.collapse_checked ? 1 : 0;
		res.collapse_failures += r.collapse_holds ? 0 : 1;
		int v = r.violations();
		res.violations += v;
		if (v && res.failures.size() < 10)
			res.failures.push_back("A=" + describe(a) + " B=" + describe(b));
	}
	return res;
}

std::string to_json(const DifferenceReport &r)
{
	nlohmann::ordered_json j;
	j["limsup_diff"] = r.limsup_diff;
	j["liminf_diff"] = r.liminf_diff;
	nlohmann::ordered_json rules = nlohmann::ordered_json::array();
	for (const auto &c : r.rules)
		rules.push_back({{"rule", c.rule}, {"lhs", c.lhs}, {"rhs", c.rhs},
		                 {"slack", c.slack}, {"holds", c.holds}});
	j["rules"] = rules;
	if (r.collapse_checked)
		j["constant_b_collapse"] = r.collapse_holds;
	j["violations"] = r.violations();
	return j.dump();
}

std::string to_json(const SweepResult &r, const SweepOptions &opts)
{
	nlohmann::ordered_json j;
	j["instances"] = r.instances;
	j["seed"] = opts.seed;
	j["violations"] = r.violations;
	j["constant_b_cases"] = r.collapse_cases;
	j["constant_b_failures"] = r.collapse_failures;
	j["failures"] = r.failures;
	return j.dump();
}

} // namespace dsg
