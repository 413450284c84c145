#pragma once

#include "dsg/corpus.hpp"
#include "dsg/indicators.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dsg {

// An estimate with the bracket spanned by the two modulus surrogates.
struct Interval {
	double value = 0.0;
	double lo = 0.0;
	double hi = 0.0;

	double half_width() const;
};

Interval from_estimate(const IndicatorEstimate &e);
Interval exact(double v);
Interval operator*(const Interval &a, const Interval &b);
Interval operator/(const Interval &a, const Interval &b);
// (x / y)^(1/e) on positive reals
Interval root_ratio(const Interval &x, const Interval &y, const Interval &e);
Interval min(const Interval &a, const Interval &b);
Interval max(const Interval &a, const Interval &b);

// f, g, h and the indices tying them: f has relative pair (m,q) and g has
// (m,p) with respect to h.
struct Triple {
	CorpusEntry f, g, h;
	int m = 0;
	int p = 0;
	int q = 0;
	// one grid for every estimate; otherwise each estimate uses the grid of
	// the function being measured
	std::optional<GridSpec> grid;

	std::string key() const;
};

// The four relative estimate bundles a theorem can refer to.
enum class Bundle {
	f_wrt_h, // (m, q)
	g_wrt_h, // (m, p)
	f_wrt_g, // (p, q)
	g_wrt_f, // (q, p)
};

std::string to_string(Bundle b);

// Lazily estimated bundles of one triple; shared by every theorem checked
// on it.
class TripleEstimates {
public:
	explicit TripleEstimates(Triple t, TailOptions tail = {});

	const Triple &triple() const { return t_; }
	// IncompleteInstance when the bundle cannot be estimated
	const RelativeIndicators &get(Bundle b);

private:
	Triple t_;
	TailOptions tail_;
	std::array<std::optional<RelativeIndicators>, 4> cache_;
	std::array<std::string, 4> failure_;
};

std::vector<std::string> theorem_ids();

struct TheoremInstance {
	std::string theorem_id;
	Triple triple;
	double tolerance = 2e-2;
	// degenerate thresholds and the admissibility band [eps, 1/eps]
	double eps = 1e-3;
};

enum class Relation { le, eq };

struct ChainEntry {
	std::string label;
	Interval v;
};

struct ChainLink {
	Relation rel = Relation::le;
	double slack = 0.0; // rhs - lhs for le, -|rhs - lhs| for eq
	double tolerance = 0.0;
	bool holds = true;
};

// entries[i] rel[i] entries[i+1]
struct Chain {
	std::string claim;
	std::vector<ChainEntry> entries;
	std::vector<ChainLink> links;
};

struct Hypothesis {
	std::string name;
	bool holds = true;
	std::string detail;
};

enum class Verdict { pass, vacuous, fail };

std::string to_string(Verdict v);

struct CheckReport {
	std::string theorem_id;
	std::string f, g, h;
	int m = 0, p = 0, q = 0;
	double tolerance = 0.0;
	std::vector<Hypothesis> hypotheses;
	std::vector<Chain> chains;
	std::vector<std::string> notes;
	Verdict verdict = Verdict::vacuous;

	bool hypotheses_hold() const;
	double min_margin() const; // smallest slack + tolerance over all links
};

CheckReport check_chain(const TheoremInstance &inst);
CheckReport check_chain(const std::string &theorem_id, TripleEstimates &est,
                        double tolerance = 2e-2, double eps = 1e-3);
// zero/infinite cases: "C7" reads degeneracy of g w.r.t. h, "C8" of f
CheckReport check_degenerate(const std::string &theorem_id, TripleEstimates &est,
                             double eps = 1e-3);
CheckReport check_regular_collapse(TripleEstimates &est, double tolerance = 2e-2,
                              double eps = 1e-3);

// Instances sharing a triple reuse its estimates. Reports keep input order;
// an instance that cannot be estimated throws IncompleteInstance.
std::vector<CheckReport> check_batch(const std::vector<TheoremInstance> &batch);

std::string to_json(const CheckReport &r);
std::string to_json(const std::vector<CheckReport> &rs);
std::string to_table(const std::vector<CheckReport> &rs);

} // namespace dsg
