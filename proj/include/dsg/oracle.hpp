#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dsg {

// An eventually periodic sequence: transient terms, then cycle repeated.
struct TailSequence {
	std::vector<double> transient;
	std::vector<double> cycle;

	double at(std::size_t n) const;
};

// (limsup, liminf) = (max cycle, min cycle)
std::pair<double, double> exact_limits(const TailSequence &s);

// termwise A - B, again eventually periodic with lcm cycle length
TailSequence difference(const TailSequence &a, const TailSequence &b);

struct RuleCheck {
	std::string rule;
	double lhs = 0.0;
	double rhs = 0.0;
	double slack = 0.0; // >= 0 when the rule holds
	bool holds = true;
};

struct DifferenceReport {
	double limsup_diff = 0.0;
	double liminf_diff = 0.0;
	std::vector<RuleCheck> rules;
	// B constant: liminf/limsup of A - B equal those of A shifted by B
	bool collapse_checked = false;
	bool collapse_holds = true;

	int violations() const;
};

DifferenceReport check_difference_rules(const TailSequence &a,
                                        const TailSequence &b);

struct SweepOptions {
	int instances = 10000;
	std::uint64_t seed = 7;
	int max_transient = 4;
	int max_cycle = 6;
	double bound = 10.0;
};

struct SweepResult {
	int instances = 0;
	int violations = 0;
	int collapse_cases = 0;
	int collapse_failures = 0;
	std::vector<std::string> failures; // first few offending instances
};

SweepResult oracle_sweep(const SweepOptions &opts);

std::string to_json(const DifferenceReport &r);
std::string to_json(const SweepResult &r, const SweepOptions &opts);

} // namespace dsg
