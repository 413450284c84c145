#include "dsg/theorems.hpp"

#include "dsg/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

namespace dsg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// smallest and largest of the candidates, NaNs skipped
Interval spread(double value, std::initializer_list<double> corners)
{
	Interval r{value, kInf, -kInf};
	for (double c : corners) {
		if (std::isnan(c))
			continue;
		r.lo = std::min(r.lo, c);
		r.hi = std::max(r.hi, c);
	}
	if (!std::isnan(value)) {
		r.lo = std::min(r.lo, value);
		r.hi = std::max(r.hi, value);
	}
	if (r.lo > r.hi)
		r.lo = r.hi = kNaN;
	return r;
}

} // namespace

double Interval::half_width() const { return 0.5 * (hi - lo); }

Interval from_estimate(const IndicatorEstimate &e) { return {e.value, e.lo, e.hi}; }

Interval exact(double v) { return {v, v, v}; }

Interval operator*(const Interval &a, const Interval &b)
{
	return spread(a.value * b.value,
	              {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi});
}

Interval operator/(const Interval &a, const Interval &b)
{
	return spread(a.value / b.value,
	              {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi});
}

Interval root_ratio(const Interval &x, const Interval &y, const Interval &e)
{
	auto f = [](double a, double b, double c) { return std::pow(a / b, 1.0 / c); };
	return spread(f(x.value, y.value, e.value),
	              {f(x.lo, y.lo, e.lo), f(x.lo, y.lo, e.hi), f(x.lo, y.hi, e.lo),
	               f(x.lo, y.hi, e.hi), f(x.hi, y.lo, e.lo), f(x.hi, y.lo, e.hi),
	               f(x.hi, y.hi, e.lo), f(x.hi, y.hi, e.hi)});
}

Interval min(const Interval &a, const Interval &b)
{
	return {std::min(a.value, b.value), std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval max(const Interval &a, const Interval &b)
{
	return {std::max(a.value, b.value), std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::string Triple::key() const
{
	return f.id + "|" + g.id + "|" + h.id + "|" + std::to_string(m) + "," +
	       std::to_string(p) + "," + std::to_string(q) + "|" +
	       (grid ? grid->key() : std::string("default"));
}

std::string to_string(Bundle b)
{
	switch (b) {
	case Bundle::f_wrt_h:
		return "f w.r.t. h at (m,q)";
	case Bundle::g_wrt_h:
		return "g w.r.t. h at (m,p)";
	case Bundle::f_wrt_g:
		return "f w.r.t. g at (p,q)";
	default:
		return "g w.r.t. f at (q,p)";
	}
}

TripleEstimates::TripleEstimates(Triple t, TailOptions tail)
    : t_(std::move(t)), tail_(tail)
{
	if (!t_.f.source || !t_.g.source || !t_.h.source)
		throw IncompleteInstance("triple needs all of f, g and h");
	if (t_.m < 0 || t_.p < 0 || t_.q < 0)
		throw InvalidInput("m, p and q must be non-negative");
}

const RelativeIndicators &TripleEstimates::get(Bundle b)
{
	auto i = static_cast<std::size_t>(b);
	if (cache_[i])
		return *cache_[i];
	if (!failure_[i].empty())
		throw IncompleteInstance(failure_[i]);

	const CorpusEntry *subject = &t_.f, *scale = &t_.h;
	int a = t_.m, c = t_.q;
	switch (b) {
	case Bundle::f_wrt_h:
		break;
	case Bundle::g_wrt_h:
		subject = &t_.g;
		c = t_.p;
		break;
	case Bundle::f_wrt_g:
		scale = &t_.g;
		a = t_.p;
		break;
	case Bundle::g_wrt_f:
		subject = &t_.g;
		scale = &t_.f;
		a = t_.q;
		c = t_.p;
		break;
	}
	RelativeOptions opts;
	opts.tail = tail_;
	try {
		cache_[i] = relative_indicators(subject->source, scale->source, a, c,
		                                t_.grid ? *t_.grid : subject->grid, opts);
	} catch (const Error &e) {
		failure_[i] = "cannot estimate " + to_string(b) + ": " + e.what();
		throw IncompleteInstance(failure_[i]);
	}
	return *cache_[i];
}

std::vector<std::string> theorem_ids()
{
	return {"T1",  "C1",  "C2",  "C3",  "C4", "C5",  "C6",  "C7",  "C8",
	        "R1",  "Tt1", "Ct1", "Tt4", "Ct4", "Tt2", "Ct2", "Tt3", "Ct3",
	        "T41", "T42"};
}

std::string to_string(Verdict v)
{
	switch (v) {
	case Verdict::pass:
		return "pass";
	case Verdict::fail:
		return "fail";
	default:
		return "vacuous";
	}
}

bool CheckReport::hypotheses_hold() const
{
	return std::all_of(hypotheses.begin(), hypotheses.end(),
	                   [](const Hypothesis &h) { return h.holds; });
}

double CheckReport::min_margin() const
{
	double m = kInf;
	for (const auto &c : chains)
		for (const auto &l : c.links)
			m = std::min(m, l.slack + l.tolerance);
	return m;
}

namespace {

enum class Sym { rho, lambda, Delta, Delta_bar, tau, tau_bar };

const char *sym_name(Sym s)
{
	switch (s) {
	case Sym::rho:
		return "rho";
	case Sym::lambda:
		return "lambda";
	case Sym::Delta:
		return "Delta";
	case Sym::Delta_bar:
		return "Delta_bar";
	case Sym::tau:
		return "tau";
	default:
		return "tau_bar";
	}
}

const char *subscript(Bundle b)
{
	switch (b) {
	case Bundle::f_wrt_h:
		return "_h(f)";
	case Bundle::g_wrt_h:
		return "_h(g)";
	case Bundle::f_wrt_g:
		return "_g(f)";
	default:
		return "_f(g)";
	}
}

struct Term {
	std::string label;
	Interval v;
};

Term operator/(const Term &a, const Term &b) { return {a.label + "/" + b.label, a.v / b.v}; }
Term operator*(const Term &a, const Term &b) { return {a.label + "*" + b.label, a.v * b.v}; }

Term root(const Term &x, const Term &y, const Term &e)
{
	return {"[" + x.label + "/" + y.label + "]^(1/" + e.label + ")",
	        root_ratio(x.v, y.v, e.v)};
}

Term extreme(const char *name, const std::vector<Term> &ts, bool take_min)
{
	Term r{std::string(name) + "{", ts.front().v};
	for (std::size_t i = 0; i < ts.size(); ++i) {
		r.label += (i ? ", " : "") + ts[i].label;
		if (i)
			r.v = take_min ? min(r.v, ts[i].v) : max(r.v, ts[i].v);
	}
	r.label += "}";
	return r;
}

Term tmin(const std::vector<Term> &ts) { return extreme("min", ts, true); }
Term tmax(const std::vector<Term> &ts) { return extreme("max", ts, false); }
Term one() { return {"1", exact(1.0)}; }

// Collects referenced estimates, hypotheses and chains for one report.
class Context {
public:
	Context(TripleEstimates &est, double tol, double eps, const std::string &id)
	    : est_(est), tol_(tol), eps_(eps)
	{
		const Triple &t = est.triple();
		r_.theorem_id = id;
		r_.f = t.f.id;
		r_.g = t.g.id;
		r_.h = t.h.id;
		r_.m = t.m;
		r_.p = t.p;
		r_.q = t.q;
		r_.tolerance = tol;
	}

	const IndicatorEstimate *estimate(Sym s, Bundle b)
	{
		const RelativeIndicators &ri = est_.get(b);
		const std::optional<IndicatorEstimate> *o = nullptr;
		switch (s) {
		case Sym::rho:
			return &ri.order;
		case Sym::lambda:
			return &ri.lower_order;
		case Sym::Delta:
			o = &ri.type;
			break;
		case Sym::Delta_bar:
			o = &ri.lower_type;
			break;
		case Sym::tau:
			o = &ri.weak_tau;
			break;
		case Sym::tau_bar:
			o = &ri.weak_tau_bar;
			break;
		}
		return *o ? &**o : nullptr;
	}

	// an estimate that must be usable for the claim to be tested
	Term operator()(Sym s, Bundle b)
	{
		std::string label = std::string(sym_name(s)) + subscript(b);
		const IndicatorEstimate *e = estimate(s, b);
		if (!e) {
			unusable_.insert(label + " (not defined: its order is 0 or infinite)");
			return {label, {kNaN, kNaN, kNaN}};
		}
		if (!usable(*e))
			unusable_.insert(label + " = " + fmt(e->value) +
			                 (e->converged || e->stable ? "" : " (not settled)"));
		return {label, from_estimate(*e)};
	}

	// a raw estimate, for threshold checks that expect 0 or infinity
	Term raw(Sym s, Bundle b)
	{
		const IndicatorEstimate *e = estimate(s, b);
		std::string label = std::string(sym_name(s)) + subscript(b);
		return {label, e ? from_estimate(*e) : Interval{kNaN, kNaN, kNaN}};
	}

	bool usable(const IndicatorEstimate &e) const
	{
		return admissible(e, eps_) && std::isfinite(e.lo) && std::isfinite(e.hi);
	}

	// the order is finite and nonzero
	void has_pair(Bundle b, const std::string &who)
	{
		const IndicatorEstimate &e = est_.get(b).order;
		bool ok = usable(e);
		hypothesis(who, ok, "rho" + std::string(subscript(b)) + " = " + fmt(e.value));
	}

	bool regular(Bundle b)
	{
		Term r = (*this)(Sym::rho, b), l = (*this)(Sym::lambda, b);
		return std::abs(r.v.value - l.v.value) <= link_tol(r.v, l.v);
	}

	void require_regular(Bundle b, const std::string &who)
	{
		Term r = (*this)(Sym::rho, b), l = (*this)(Sym::lambda, b);
		hypothesis(who, regular(b),
		           r.label + " = " + fmt(r.v.value) + ", " + l.label + " = " +
		               fmt(l.v.value));
	}

	bool same(const Term &a, const Term &b) const
	{
		return std::abs(a.v.value - b.v.value) <= link_tol(a.v, b.v);
	}

	void hypothesis(std::string name, bool holds, std::string detail)
	{
		r_.hypotheses.push_back({std::move(name), holds, std::move(detail)});
	}

	void chain(std::string claim, const std::vector<Term> &ts, Relation rel,
	           double tol)
	{
		Chain c;
		c.claim = std::move(claim);
		for (const auto &t : ts)
			c.entries.push_back({t.label, t.v});
		for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
			const Interval &a = ts[i].v, &b = ts[i + 1].v;
			ChainLink l;
			l.rel = rel;
			l.slack = rel == Relation::le ? b.value - a.value : -std::abs(b.value - a.value);
			l.tolerance = tol + a.half_width() + b.half_width();
			// NaN slack (an unusable estimate) never holds
			l.holds = l.slack >= -l.tolerance;
			c.links.push_back(l);
		}
		r_.chains.push_back(std::move(c));
	}

	void chain(std::string claim, const std::vector<Term> &ts, Relation rel)
	{
		chain(std::move(claim), ts, rel, tol_);
	}

	void note(std::string n) { r_.notes.push_back(std::move(n)); }

	double eps() const { return eps_; }

	CheckReport finish()
	{
		if (!unusable_.empty()) {
			std::string d;
			for (const auto &u : unusable_)
				d += (d.empty() ? "" : "; ") + u;
			hypothesis("referenced estimates finite, nonzero and settled", false, d);
		} else {
			hypothesis("referenced estimates finite, nonzero and settled", true, "");
		}
		if (!r_.hypotheses_hold())
			r_.verdict = Verdict::vacuous;
		else {
			bool ok = true;
			for (const auto &c : r_.chains)
				for (const auto &l : c.links)
					ok = ok && l.holds;
			r_.verdict = ok ? Verdict::pass : Verdict::fail;
		}
		return std::move(r_);
	}

	static std::string fmt(double v)
	{
		char buf[32];
		std::snprintf(buf, sizeof buf, "%.6g", v);
		return buf;
	}

private:
	double link_tol(const Interval &a, const Interval &b) const
	{
		return tol_ + a.half_width() + b.half_width();
	}

	TripleEstimates &est_;
	double tol_, eps_;
	CheckReport r_;
	std::set<std::string> unusable_;
};

constexpr Bundle FH = Bundle::f_wrt_h, GH = Bundle::g_wrt_h, FG = Bundle::f_wrt_g,
                 GF = Bundle::g_wrt_f;
constexpr Relation LE = Relation::le, EQ = Relation::eq;

const char *const kPairF = "f has relative index-pair (m,q) w.r.t. h";
const char *const kPairG = "g has relative index-pair (m,p) w.r.t. h";
const char *const kExponentReading =
    "the exponent written 1/lambda_g(m,p) is read as 1/lambda_h(g)";

void theorem1(Context &x)
{
	auto lf = x(Sym::lambda, FH), rf = x(Sym::rho, FH);
	auto lg = x(Sym::lambda, GH), rg = x(Sym::rho, GH);
	x.chain("lower and upper relative orders of f w.r.t. g",
	        {lf / rg, x(Sym::lambda, FG), tmin({lf / lg, rf / rg}),
	         tmax({lf / lg, rf / rg}), x(Sym::rho, FG), rf / lg},
	        LE);
}

// f regular (C1) or g regular (C2)
void regular_one(Context &x, bool f_regular)
{
	auto lf = x(Sym::lambda, FH), rf = x(Sym::rho, FH);
	auto lg = x(Sym::lambda, GH), rg = x(Sym::rho, GH);
	if (f_regular) {
		x.require_regular(FH, "f of regular relative growth w.r.t. h");
		x.chain("lambda_g(f) = rho_h(f)/rho_h(g)", {x(Sym::lambda, FG), rf / rg}, EQ);
		x.chain("rho_g(f) = rho_h(f)/lambda_h(g)", {x(Sym::rho, FG), rf / lg}, EQ);
	} else {
		x.require_regular(GH, "g of regular relative growth w.r.t. h");
		x.chain("lambda_g(f) = lambda_h(f)/rho_h(g)", {x(Sym::lambda, FG), lf / rg}, EQ);
		x.chain("rho_g(f) = rho_h(f)/rho_h(g)", {x(Sym::rho, FG), rf / rg}, EQ);
	}
	if (!x.same(rf, rg)) {
		x.note("rho_h(f) != rho_h(g): the unit-value clause does not apply");
		return;
	}
	// the clause mixes orientations; each side is reported on its own
	x.note("rho_h(f) = rho_h(g): unit-value clause checked in both orientations");
	if (f_regular) {
		x.chain("lambda_g(f) = 1", {x(Sym::lambda, FG), one()}, EQ);
		x.chain("rho_f(g) = 1", {x(Sym::rho, GF), one()}, EQ);
	} else {
		x.chain("rho_g(f) = 1", {x(Sym::rho, FG), one()}, EQ);
		x.chain("lambda_f(g) = 1", {x(Sym::lambda, GF), one()}, EQ);
	}
}

void both_regular(Context &x, bool unit)
{
	x.require_regular(FH, "f of regular relative growth w.r.t. h");
	x.require_regular(GH, "g of regular relative growth w.r.t. h");
	auto rf = x(Sym::rho, FH), rg = x(Sym::rho, GH);
	if (!unit) {
		x.chain("lambda_g(f) = rho_g(f) = rho_h(f)/rho_h(g)",
		        {x(Sym::lambda, FG), x(Sym::rho, FG), rf / rg}, EQ);
		return;
	}
	x.hypothesis("rho_h(f) = rho_h(g)", x.same(rf, rg),
	             rf.label + " = " + Context::fmt(rf.v.value) + ", " + rg.label + " = " +
	                 Context::fmt(rg.v.value));
	x.chain("lambda_g(f) = rho_g(f) = lambda_f(g) = rho_f(g) = 1",
	        {x(Sym::lambda, FG), x(Sym::rho, FG), x(Sym::lambda, GF), x(Sym::rho, GF),
	         one()},
	        EQ);
}

// C5 (orders) and C6 (lower orders)
void reciprocal(Context &x, bool upper)
{
	bool reg = x.regular(FH) && x.regular(GH);
	Sym s = upper ? Sym::rho : Sym::lambda;
	Term prod = x(s, FG) * x(s, GF);
	if (reg) {
		x.note("both regular: product must equal 1");
		x.chain(prod.label + " = 1", {prod, one()}, EQ);
	} else if (upper) {
		x.note("f or g irregular: product bounded below by 1");
		x.chain(prod.label + " >= 1", {one(), prod}, LE);
	} else {
		x.note("f or g irregular: product bounded above by 1");
		x.chain(prod.label + " <= 1", {prod, one()}, LE);
	}
}

void type_theorems(Context &x, const std::string &id)
{
	auto D = [&](Bundle b) { return x(Sym::Delta, b); };
	auto Db = [&](Bundle b) { return x(Sym::Delta_bar, b); };
	auto t = [&](Bundle b) { return x(Sym::tau, b); };
	auto tb = [&](Bundle b) { return x(Sym::tau_bar, b); };
	Term rg = x(Sym::rho, GH), lg = x(Sym::lambda, GH);

	if (id == "Tt1")
		x.chain("bounds on Delta_g(f)",
		        {tmax({root(Db(FH), t(GH), lg), root(D(FH), tb(GH), lg)}), D(FG),
		         root(D(FH), Db(GH), rg)},
		        LE);
	else if (id == "Ct1")
		x.chain("upper bound on Delta_g(f) through weak types",
		        {D(FG), tmin({root(tb(FH), t(GH), lg), root(tb(FH), Db(GH), rg)})}, LE);
	else if (id == "Tt4")
		x.chain("bounds on tau_g(f)",
		        {root(t(FH), tb(GH), lg), t(FG),
		         tmin({root(t(FH), Db(GH), rg), root(tb(FH), D(GH), rg)})},
		        LE);
	else if (id == "Ct4")
		x.chain("lower bound on tau_g(f) through types",
		        {tmax({root(Db(FH), D(GH), rg), root(Db(FH), tb(GH), lg)}), t(FG)}, LE);
	else if (id == "Tt2")
		x.chain("bounds on Delta_bar_g(f)",
		        {root(Db(FH), tb(GH), lg), Db(FG),
		         tmin({root(Db(FH), Db(GH), rg), root(D(FH), D(GH), rg)})},
		        LE);
	else if (id == "Ct2") {
		x.note("the undefined sigma_h(g) / sigma_bar_h(g) are read as Delta_h(g) / "
		       "Delta_bar_h(g)");
		x.chain("upper bound on Delta_bar_g(f) through weak types",
		        {Db(FG), tmin({root(t(FH), t(GH), lg), root(tb(FH), tb(GH), lg),
		                       root(tb(FH), D(GH), rg), root(t(FH), Db(GH), rg)})},
		        LE);
	} else if (id == "Tt3") {
		x.note(kExponentReading);
		x.chain("bounds on tau_bar_g(f)",
		        {tmax({root(tb(FH), tb(GH), lg), root(t(FH), t(GH), lg)}), tb(FG),
		         root(tb(FH), Db(GH), rg)},
		        LE);
	} else if (id == "Ct3")
		x.chain("lower bound on tau_bar_g(f) through types",
		        {tmax({root(Db(FH), Db(GH), rg), root(D(FH), D(GH), rg),
		               root(D(FH), tb(GH), lg), root(Db(FH), t(GH), lg)}),
		         tb(FG)},
		        LE);
	else if (id == "T41" || id == "T42") {
		bool g_reg = id == "T41";
		if (g_reg)
			x.require_regular(GH, "g of regular relative growth w.r.t. h");
		else
			x.require_regular(FH, "f of regular relative growth w.r.t. h");
		x.note(kExponentReading);
		auto types = std::vector<Term>{root(Db(FH), Db(GH), rg), root(D(FH), D(GH), rg)};
		auto weak = std::vector<Term>{root(t(FH), t(GH), lg), root(tb(FH), tb(GH), lg)};
		// regular g: the type chain runs Delta_bar..Delta and the weak chain
		// tau..tau_bar; regular f swaps the middle pairs
		Term a_lo = g_reg ? Db(FG) : t(FG), a_hi = g_reg ? D(FG) : tb(FG);
		Term b_lo = g_reg ? t(FG) : Db(FG), b_hi = g_reg ? tb(FG) : D(FG);
		x.chain("type chain",
		        {root(Db(FH), D(GH), rg), a_lo, tmin(types), tmax(types), a_hi,
		         root(D(FH), Db(GH), rg)},
		        LE);
		x.chain("weak type chain",
		        {root(t(FH), tb(GH), lg), b_lo, tmin(weak), tmax(weak), b_hi,
		         root(tb(FH), t(GH), lg)},
		        LE);
	}
}

} // namespace

CheckReport check_chain(const std::string &id, TripleEstimates &est,
                        double tolerance, double eps)
{
	if (!(tolerance > 0) || !(eps > 0 && eps < 1))
		throw InvalidInput("tolerance must be positive and eps inside (0, 1)");
	if (id == "C7" || id == "C8")
		return check_degenerate(id, est, eps);
	if (id == "R1")
		return check_regular_collapse(est, tolerance, eps);
	auto ids = theorem_ids();
	if (std::find(ids.begin(), ids.end(), id) == ids.end())
		throw InvalidInput("unknown theorem id '" + id + "'");

	Context x(est, tolerance, eps, id);
	x.has_pair(FH, kPairF);
	x.has_pair(GH, kPairG);
	if (id == "T1")
		theorem1(x);
	else if (id == "C1" || id == "C2")
		regular_one(x, id == "C1");
	else if (id == "C3" || id == "C4")
		both_regular(x, id == "C4");
	else if (id == "C5" || id == "C6")
		reciprocal(x, id == "C5");
	else
		type_theorems(x, id);
	return x.finish();
}

CheckReport check_chain(const TheoremInstance &inst)
{
	TripleEstimates est(inst.triple);
	return check_chain(inst.theorem_id, est, inst.tolerance, inst.eps);
}

CheckReport check_degenerate(const std::string &id, TripleEstimates &est, double eps)
{
	if (id != "C7" && id != "C8")
		throw InvalidInput("degenerate checks are C7 and C8, not '" + id + "'");
	Context x(est, eps, eps, id);
	bool seven = id == "C7";
	// C7: f has its pair, g degenerate w.r.t. h; C8: the other way round
	x.has_pair(seven ? FH : GH, seven ? kPairF : kPairG);
	Bundle d = seven ? GH : FH;
	Term r = x.raw(Sym::rho, d), l = x.raw(Sym::lambda, d);
	Term rho_fg = x.raw(Sym::rho, FG), lam_fg = x.raw(Sym::lambda, FG);
	Term small{"eps", exact(eps)}, big{"1/eps", exact(1.0 / eps)};

	int triggered = 0;
	auto expect = [&](bool cond, const std::string &claim, const Term &target,
	                  bool to_infinity) {
		if (!cond)
			return;
		++triggered;
		if (to_infinity)
			x.chain(claim, {big, target}, LE, 0.0);
		else
			x.chain(claim, {target, small}, LE, 0.0);
	};
	if (seven) {
		expect(r.v.value < eps, "(i) rho_h(g) = 0 => lambda_g(f) = inf", lam_fg, true);
		expect(l.v.value < eps, "(ii) lambda_h(g) = 0 => rho_g(f) = inf", rho_fg, true);
		expect(r.v.value > 1 / eps, "(iii) rho_h(g) = inf => lambda_g(f) = 0", lam_fg,
		       false);
		expect(l.v.value > 1 / eps, "(iv) lambda_h(g) = inf => rho_g(f) = 0", rho_fg,
		       false);
	} else {
		expect(r.v.value < eps, "(i) rho_h(f) = 0 => rho_g(f) = 0", rho_fg, false);
		expect(l.v.value < eps, "(ii) lambda_h(f) = 0 => lambda_g(f) = 0", lam_fg, false);
		expect(r.v.value > 1 / eps, "(iii) rho_h(f) = inf => rho_g(f) = inf", rho_fg,
		       true);
		expect(l.v.value > 1 / eps, "(iv) lambda_h(f) = inf => lambda_g(f) = inf", lam_fg,
		       true);
	}
	x.hypothesis("a degenerate case is triggered", triggered > 0,
	             r.label + " = " + Context::fmt(r.v.value) + ", " + l.label + " = " +
	                 Context::fmt(l.v.value));
	CheckReport rep = x.finish();
	rep.tolerance = 0.0;
	return rep;
}

CheckReport check_regular_collapse(TripleEstimates &est, double tolerance, double eps)
{
	Context x(est, tolerance, eps, "R1");
	x.has_pair(FH, kPairF);
	x.has_pair(GH, kPairG);
	auto lf = x(Sym::lambda, FH), rf = x(Sym::rho, FH);
	auto lg = x(Sym::lambda, GH), rg = x(Sym::rho, GH);
	auto rfg = x(Sym::rho, FG), lfg = x(Sym::lambda, FG);
	bool g_reg = x.regular(GH), f_reg = x.regular(FH);
	x.hypothesis("g or f of regular relative growth w.r.t. h", g_reg || f_reg,
	             std::string("g ") + (g_reg ? "regular" : "irregular") + ", f " +
	                 (f_reg ? "regular" : "irregular"));
	if (g_reg) {
		x.chain("g regular: rho_g(f) = rho_h(f)/rho_h(g)", {rfg, rf / rg}, EQ);
		x.chain("g regular: lambda_g(f) = lambda_h(f)/lambda_h(g)", {lfg, lf / lg}, EQ);
	}
	if (f_reg) {
		x.chain("f regular: rho_g(f) = lambda_h(f)/lambda_h(g)", {rfg, lf / lg}, EQ);
		x.chain("f regular: lambda_g(f) = rho_h(f)/rho_h(g)", {lfg, rf / rg}, EQ);
	}
	return x.finish();
}

std::vector<CheckReport> check_batch(const std::vector<TheoremInstance> &batch)
{
	// one estimate set per distinct triple; groups run concurrently
	std::map<std::string, std::vector<std::size_t>> groups;
	std::vector<std::string> order;
	for (std::size_t i = 0; i < batch.size(); ++i) {
		std::string k = batch[i].triple.key();
		if (!groups.count(k))
			order.push_back(k);
		groups[k].push_back(i);
	}
	std::vector<CheckReport> out(batch.size());
	std::atomic<std::size_t> next{0};
	auto work = [&] {
		for (std::size_t gi; (gi = next++) < order.size();) {
			const auto &members = groups.at(order[gi]);
			TripleEstimates est(batch[members.front()].triple);
			for (std::size_t i : members)
				out[i] = check_chain(batch[i].theorem_id, est, batch[i].tolerance,
				                     batch[i].eps);
		}
	};
	unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
	                                              static_cast<unsigned>(order.size())));
	std::vector<std::future<void>> workers;
	for (unsigned i = 1; i < n; ++i)
		workers.push_back(std::async(std::launch::async, work));
	std::exception_ptr first;
	try {
		work();
	} catch (...) {
		first = std::current_exception();
		next = order.size();
	}
	for (auto &w : workers) {
		try {
			w.get();
		} catch (...) {
			if (!first)
				first = std::current_exception();
		}
	}
	if (first)
		std::rethrow_exception(first);
	return out;
}

namespace {

nlohmann::ordered_json num(double v)
{
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	return v;
}

nlohmann::ordered_json report_json(const CheckReport &r)
{
	nlohmann::ordered_json j;
	j["theorem"] = r.theorem_id;
	j["f"] = r.f;
	j["g"] = r.g;
	j["h"] = r.h;
	j["m"] = r.m;
	j["p"] = r.p;
	j["q"] = r.q;
	j["tolerance"] = r.tolerance;
	j["verdict"] = to_string(r.verdict);
	auto hyps = nlohmann::ordered_json::array();
	for (const auto &h : r.hypotheses)
		hyps.push_back({{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
	j["hypotheses"] = hyps;
	auto chains = nlohmann::ordered_json::array();
	for (const auto &c : r.chains) {
		nlohmann::ordered_json cj;
		cj["claim"] = c.claim;
		auto entries = nlohmann::ordered_json::array();
		for (const auto &e : c.entries)
			entries.push_back({{"label", e.label},
			                   {"value", num(e.v.value)},
			                   {"lo", num(e.v.lo)},
			                   {"hi", num(e.v.hi)}});
		cj["entries"] = entries;
		auto links = nlohmann::ordered_json::array();
		for (const auto &l : c.links)
			links.push_back({{"relation", l.rel == Relation::le ? "<=" : "="},
			                 {"slack", num(l.slack)},
			                 {"tolerance", num(l.tolerance)},
			                 {"holds", l.holds}});
		cj["links"] = links;
		chains.push_back(cj);
	}
	j["chains"] = chains;
	j["notes"] = r.notes;
	return j;
}

} // namespace

std::string to_json(const CheckReport &r) { return report_json(r).dump(); }

std::string to_json(const std::vector<CheckReport> &rs)
{
	nlohmann::ordered_json j;
	int counts[3] = {0, 0, 0};
	auto reports = nlohmann::ordered_json::array();
	for (const auto &r : rs) {
		++counts[static_cast<int>(r.verdict)];
		reports.push_back(report_json(r));
	}
	j["pass"] = counts[static_cast<int>(Verdict::pass)];
	j["vacuous"] = counts[static_cast<int>(Verdict::vacuous)];
	j["fail"] = counts[static_cast<int>(Verdict::fail)];
	j["reports"] = reports;
	return j.dump(2);
}

std::string to_table(const std::vector<CheckReport> &rs)
{
	std::ostringstream os;
	char buf[512];
	for (const auto &r : rs) {
		os << r.theorem_id << "  " << to_string(r.verdict) << "  f=" << r.f
		   << " g=" << r.g << " h=" << r.h << "  (m,p,q)=(" << r.m << "," << r.p << ","
		   << r.q << ")\n";
		for (const auto &h : r.hypotheses)
			if (!h.holds)
				os << "  unmet: " << h.name << (h.detail.empty() ? "" : " [" + h.detail + "]")
				   << "\n";
		for (const auto &c : r.chains) {
			os << "  " << c.claim << "\n";
			for (std::size_t i = 0; i < c.entries.size(); ++i) {
				std::snprintf(buf, sizeof buf, "    %-60s %12.6g\n",
				              c.entries[i].label.c_str(), c.entries[i].v.value);
				os << buf;
				if (i < c.links.size()) {
					const ChainLink &l = c.links[i];
					std::snprintf(buf, sizeof buf,
					              "      %-2s slack %+.3e  tol %.3e  %s\n",
					              l.rel == Relation::le ? "<=" : "=", l.slack, l.tolerance,
					              l.holds ? "ok" : "VIOLATED");
					os << buf;
				}
			}
		}
		for (const auto &n : r.notes)
			os << "  note: " << n << "\n";
	}
	return os.str();
}

} // namespace dsg
