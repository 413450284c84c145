#include "catch_amalgamated.hpp"

#include "dsg/errors.hpp"
#include "dsg/theorems.hpp"

#include <cmath>

using namespace dsg;
using Catch::Approx;

namespace {

const char *const kOscGrid = "2980.9579870417283:1.7e14:160:log";

Triple triple(const std::string &f, const std::string &g, const std::string &h,
              int m = 0, int p = 0, int q = 0, const char *grid = nullptr)
{
	Triple t{instantiate(f), instantiate(g), instantiate(h), m, p, q, {}};
	if (grid)
		t.grid = parse_grid(grid);
	return t;
}

void check_consistent(const CheckReport &r)
{
	bool links_hold = true;
	for (const auto &c : r.chains) {
		REQUIRE(c.links.size() + 1 == c.entries.size());
		for (const auto &l : c.links) {
			CHECK(l.holds == (l.slack >= -l.tolerance));
			links_hold = links_hold && l.holds;
		}
	}
	Verdict expected = !r.hypotheses_hold() ? Verdict::vacuous
	                   : links_hold         ? Verdict::pass
	                                        : Verdict::fail;
	CHECK(r.verdict == expected);
}

} // namespace

TEST_CASE("interval arithmetic")
{
	Interval a{2, 1.5, 2.5}, b{4, 3, 5};
	Interval d = a / b;
	CHECK(d.value == 0.5);
	CHECK(d.lo == Approx(1.5 / 5));
	CHECK(d.hi == Approx(2.5 / 3));
	Interval p = a * b;
	CHECK(p.lo == 4.5);
	CHECK(p.hi == 12.5);

	// (x / y)^(1/e) over all bracket corners
	Interval r = root_ratio({8, 8, 8}, {2, 2, 2}, {2, 1, 4});
	CHECK(r.value == 2.0);
	CHECK(r.lo == Approx(std::sqrt(2.0)));
	CHECK(r.hi == 4.0);
	CHECK(exact(3).half_width() == 0.0);
	CHECK(min(a, b).hi == 2.5);
	CHECK(max(a, b).lo == 3.0);
}

TEST_CASE("T1 on a regular ExpExp triple")
{
	// rho_h(f) = lambda_h(f) = 2/3, rho_h(g) = lambda_h(g) = 1/3
	auto r = check_chain(TheoremInstance{
	    "T1", triple("expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1")});
	CHECK(r.verdict == Verdict::pass);
	REQUIRE(r.chains.size() == 1);
	REQUIRE(r.chains[0].entries.size() == 6);
	double expected = (2.0 / 3.0) / (1.0 / 3.0);
	for (const auto &e : r.chains[0].entries)
		CHECK(std::abs(e.v.value - expected) <= 2e-2);
	check_consistent(r);
	CHECK(to_json(r).find("\"verdict\":\"pass\"") != std::string::npos);
}

TEST_CASE("type chains on a regular ExpExp triple")
{
	// all at level 2 with slope 1: relative types are coefficient ratios, so
	// Delta_h(f) = 6/3, tau_h(g) = 2/3 and every entry is (6/3)/(2/3)
	TripleEstimates est(triple("expexp:a=1,c=6", "expexp:a=1,c=2", "expexp:a=1,c=3"));
	double expected = (6.0 / 3.0) / (2.0 / 3.0);
	for (const char *id : {"Tt1", "Ct1", "Tt4", "Ct4", "Tt2", "Ct2", "Tt3", "Ct3",
	                       "T41", "T42"}) {
		auto r = check_chain(id, est);
		INFO(id);
		CHECK(r.verdict == Verdict::pass);
		for (const auto &c : r.chains)
			for (const auto &e : c.entries)
				CHECK(std::abs(e.v.value - expected) <= 2e-2);
		check_consistent(r);
	}
	auto ct2 = check_chain("Ct2", est);
	REQUIRE_FALSE(ct2.notes.empty());
	CHECK(ct2.notes[0].find("sigma") != std::string::npos);
}

TEST_CASE("regular-case equalities and reciprocals")
{
	TripleEstimates est(triple("expexp:a=1,c=6", "expexp:a=1,c=2", "expexp:a=1,c=3"));
	for (const char *id : {"C1", "C2", "C3", "C4", "C5", "C6", "R1"}) {
		auto r = check_chain(id, est);
		INFO(id);
		CHECK(r.verdict == Verdict::pass);
		for (const auto &c : r.chains)
			for (const auto &l : c.links) {
				CHECK(l.rel == Relation::eq);
				CHECK(-l.slack <= 2e-2);
			}
		check_consistent(r);
	}
	// equal relative orders: the unit clause is checked in both orientations
	auto c1 = check_chain("C1", est);
	CHECK(c1.chains.size() == 4);
	CHECK(c1.chains[2].claim == "lambda_g(f) = 1");
	CHECK(c1.chains[3].claim == "rho_f(g) = 1");

	// C5 product: rho_g(f) rho_f(g) = (a_f/a_g)(a_g/a_f)
	TripleEstimates est2(triple("expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1"));
	auto c5 = check_chain("C5", est2);
	CHECK(c5.verdict == Verdict::pass);
	CHECK(c5.chains[0].entries[0].v.value == Approx(1.0).margin(2e-2));
	// unequal orders: C4 premise fails
	CHECK(check_chain("C4", est2).verdict == Verdict::vacuous);
	// C3 value: both orders equal a_f / a_g
	auto c3 = check_chain("C3", est2);
	for (const auto &e : c3.chains[0].entries)
		CHECK(e.v.value == Approx(2.0).margin(2e-2));
}

TEST_CASE("irregular pairs: reciprocal inequalities")
{
	TripleEstimates est(triple("osc_profile:rho=3,lambda=1,p=2,q=0",
	                           "osc_profile:rho=2,lambda=1,p=2,q=0",
	                           "tower_profile:k=2,rho=1,q=0", 0, 0, 0, kOscGrid));
	auto c5 = check_chain("C5", est);
	auto c6 = check_chain("C6", est);
	CHECK(c5.verdict == Verdict::pass);
	CHECK(c6.verdict == Verdict::pass);
	CHECK(c5.chains[0].links[0].rel == Relation::le);
	CHECK(c5.chains[0].entries[1].v.value >= 1 - 2e-2);
	CHECK(c6.chains[0].entries[0].v.value <= 1 + 2e-2);
	// neither f nor g regular
	CHECK(check_chain("R1", est).verdict == Verdict::vacuous);
	CHECK(check_chain("C3", est).verdict == Verdict::vacuous);
	CHECK(check_chain("T1", est).verdict == Verdict::pass);
}

TEST_CASE("regular collapse of relative orders")
{
	TripleEstimates reg(triple("expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1"));
	auto r = check_regular_collapse(reg);
	CHECK(r.verdict == Verdict::pass);
	CHECK(r.chains.size() == 4); // both branches apply
	for (const auto &c : r.chains)
		CHECK(c.entries[0].v.value == Approx(2.0).margin(2e-2));

	// oscillating f, regular g: f w.r.t. g oscillates between lambda/rho_g
	// and rho/rho_g, the first branch ratios
	TripleEstimates osc(triple("osc_profile:rho=2,lambda=1,p=2,q=0",
	                           "tower_profile:k=2,rho=2,q=0",
	                           "tower_profile:k=2,rho=1,q=0", 0, 0, 0, kOscGrid));
	auto o = check_regular_collapse(osc, 5e-2);
	CHECK(o.verdict == Verdict::pass);
	REQUIRE(o.chains.size() == 2);
	CHECK(o.chains[0].entries[0].v.value == Approx(1.0).margin(5e-2));
	CHECK(o.chains[1].entries[0].v.value == Approx(0.5).margin(5e-2));
	check_consistent(o);
}

TEST_CASE("degenerate relative orders")
{
	// g = Tower(3, 1/2, 1) measured by h = Tower(2, 1, 0) gives sqrt(sigma)/sigma
	auto t = triple("tower_profile:k=2,rho=2,q=0", "tower_profile:k=3,rho=0.5,q=1",
	                "tower_profile:k=2,rho=1,q=0", 0, 0, 0, "1e6:1e8:64:log");
	TripleEstimates est(t);
	auto c7 = check_degenerate("C7", est);
	CHECK(c7.verdict == Verdict::pass);
	REQUIRE(c7.chains.size() == 2); // rho and lambda of g both vanish
	CHECK(c7.chains[0].entries[1].v.value > 1e3);
	check_consistent(c7);
	// same through the dispatcher
	CHECK(check_chain("C7", est).verdict == Verdict::pass);

	// f = Tower(3, 1/2, 1) is the degenerate one now
	TripleEstimates est8(triple("tower_profile:k=3,rho=0.5,q=1",
	                            "tower_profile:k=2,rho=2,q=0",
	                            "tower_profile:k=2,rho=1,q=0", 0, 0, 0, "1e6:1e8:64:log"));
	auto c8 = check_degenerate("C8", est8);
	CHECK(c8.verdict == Verdict::pass);
	CHECK(c8.chains[0].entries[0].v.value < 1e-3);

	// nothing degenerate
	TripleEstimates reg(triple("expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1"));
	CHECK(check_degenerate("C7", reg).verdict == Verdict::vacuous);
	CHECK(check_degenerate("C8", reg).verdict == Verdict::vacuous);

	// thresholds are asymptotic claims: a coarse eps triggers (i) on
	// rho_h(g) = 1/2 while lambda_g(f) = 0.75/0.5 stays below 1/eps
	TripleEstimates coarse(triple("tower_profile:k=2,rho=0.75,q=0",
	                              "tower_profile:k=2,rho=0.5,q=0",
	                              "tower_profile:k=2,rho=1,q=0"));
	auto f = check_degenerate("C7", coarse, 0.6);
	CHECK(f.verdict == Verdict::fail);
	check_consistent(f);
	CHECK(to_table({f}).find("VIOLATED") != std::string::npos);
}

TEST_CASE("mixed tower and oscillating triples hold where hypotheses hold")
{
	std::vector<Triple> ts = {
	    triple("tower_profile:k=3,rho=2,q=1", "tower_profile:k=3,rho=0.5,q=1",
	           "tower_profile:k=3,rho=1,q=1", 1, 1, 1),
	    triple("tower_profile:k=3,rho=2,q=2", "tower_profile:k=3,rho=0.5,q=1",
	           "tower_profile:k=3,rho=1,q=1", 1, 1, 2),
	    triple("tower_profile:k=1,rho=3,q=1", "tower_profile:k=1,rho=1,q=1",
	           "tower_profile:k=1,rho=2,q=1", 1, 1, 1),
	    triple("tower_profile:k=2,rho=2,q=0", "osc_profile:rho=2,lambda=1,p=2,q=0",
	           "tower_profile:k=2,rho=1,q=0", 0, 0, 0, kOscGrid),
	    triple("expexp:a=2,c=1", "tower_profile:k=2,rho=1,q=0",
	           "tower_profile:k=2,rho=3,q=0", 0, 0, 0, "5:30:64"),
	};
	for (const auto &t : ts) {
		TripleEstimates est(t);
		int non_vacuous = 0;
		for (const auto &id : theorem_ids()) {
			auto r = check_chain(id, est);
			INFO(t.key() << " " << id);
			CHECK(r.verdict != Verdict::fail);
			non_vacuous += r.verdict == Verdict::pass;
			check_consistent(r);
		}
		CHECK(non_vacuous >= 5);
	}
}

TEST_CASE("batch and errors")
{
	auto t = triple("expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1");
	std::vector<TheoremInstance> batch = {{"T1", t}, {"C5", t}, {"Tt1", t, 5e-2}};
	auto rs = check_batch(batch);
	REQUIRE(rs.size() == 3);
	CHECK(rs[0].theorem_id == "T1");
	CHECK(rs[2].tolerance == 5e-2);
	for (std::size_t i = 0; i < batch.size(); ++i)
		CHECK(to_json(rs[i]) == to_json(check_chain(batch[i])));
	CHECK(to_json(rs).find("\"pass\": 3") != std::string::npos);

	TripleEstimates est(t);
	CHECK_THROWS_AS(check_chain("T9", est), InvalidInput);
	CHECK_THROWS_AS(check_chain("T1", est, -1.0), InvalidInput);
	CHECK_THROWS_AS(check_degenerate("T1", est), InvalidInput);

	// M_g^{-1} M_f = exp((log sigma)^4) is not a machine number on the grid
	auto huge = triple("tower_profile:k=4,rho=2,q=2", "tower_profile:k=4,rho=0.5,q=2",
	                   "tower_profile:k=4,rho=1,q=2", 2, 2, 2);
	CHECK_THROWS_AS(check_chain(TheoremInstance{"T1", huge}), IncompleteInstance);
	Triple missing = t;
	missing.h.source = nullptr;
	CHECK_THROWS_AS(TripleEstimates(missing), IncompleteInstance);
}
