// One line per acceptance criterion; exit status 0 only when all pass.

#include "dsg/corpus.hpp"
#include "dsg/errors.hpp"
#include "dsg/growth.hpp"
#include "dsg/indicators.hpp"
#include "dsg/levelindex.hpp"
#include "dsg/oracle.hpp"
#include "dsg/spec_io.hpp"
#include "dsg/theorems.hpp"

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace dsg;

namespace {

const std::string cli = DSG_CLI_PATH;
const std::string data_dir = DSG_DATA_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
	return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.3g", v);
	return buf;
}

struct Outcome {
	bool pass = true;
	std::string detail;
};

const std::vector<std::pair<double, double>> kExpExp = {{1, 1}, {2, 1}, {1, 3}, {3, 2}};

std::string expexp_id(double a, double c)
{
	std::ostringstream ss;
	ss << "expexp:a=" << a << ",c=" << c;
	return ss.str();
}

// 1. rho(2,0) and lambda(2,0) of ExpExp(a,c) within 1e-3 of a, < 10 s each
Outcome order_recovery()
{
	Outcome o;
	GridSpec grid = parse_grid("5:30:200");
	double worst = 0, slowest = 0;
	for (auto [a, c] : kExpExp) {
		auto t0 = Clock::now();
		auto e = instantiate(expexp_id(a, c));
		auto [rho, lambda] = order_pair(e.source, 2, 0, grid);
		double secs = seconds_since(t0);
		double err = std::max(std::abs(rho.value - a), std::abs(lambda.value - a));
		worst = std::max(worst, err);
		slowest = std::max(slowest, secs);
		if (!(err <= 1e-3) || secs >= 10)
			o.pass = false;
	}
	o.detail = "max |err| " + fmt(worst) + ", slowest family " + fmt(slowest) + " s";
	return o;
}

// 2. Delta(2,0) and lower Delta(2,0) within 1e-3 of c
Outcome type_recovery()
{
	Outcome o;
	GridSpec grid = parse_grid("5:30:200");
	double worst = 0;
	for (auto [a, c] : kExpExp) {
		auto e = instantiate(expexp_id(a, c));
		auto [d, dl] = type_pair(e.source, 2, 0, a, grid);
		double err = std::max(std::abs(d.value - c), std::abs(dl.value - c));
		worst = std::max(worst, err);
		if (!(err <= 1e-3))
			o.pass = false;
	}
	o.detail = "max |err| " + fmt(worst);
	return o;
}

// 3. relative (0,0) order a_f/a_g; relative type c_f/c_g when a_f = a_g
Outcome relative_recovery()
{
	Outcome o;
	double worst_order = 0, worst_type = 0;
	int pairs = 0, typed = 0;
	for (auto [af, cf] : kExpExp)
		for (auto [ag, cg] : kExpExp) {
			if (af == ag && cf == cg)
				continue;
			auto f = instantiate(expexp_id(af, cf)), g = instantiate(expexp_id(ag, cg));
			auto [rho, lambda] = relative_order_pair(f.source, g.source, 0, 0, f.grid);
			double err = std::max(std::abs(rho.value - af / ag),
			                      std::abs(lambda.value - af / ag));
			worst_order = std::max(worst_order, err);
			o.pass = o.pass && err <= 1e-2;
			++pairs;
			if (af == ag) {
				auto [d, dl] = relative_type_pair(f.source, g.source, 0, 0, af / ag, f.grid);
				double terr = std::max(std::abs(d.value - cf / cg),
				                       std::abs(dl.value - cf / cg));
				worst_type = std::max(worst_type, terr);
				o.pass = o.pass && terr <= 1e-2;
				++typed;
			}
		}
	o.detail = std::to_string(pairs) + " ordered pairs, max order err " + fmt(worst_order) +
	           "; " + std::to_string(typed) + " typed pairs, max type err " + fmt(worst_type);
	return o;
}

// 4. OscProfile(2,1,2,0) on a log grid of >= 3 periods of sin(log sigma)
Outcome irregular_recovery()
{
	Outcome o;
	auto e = instantiate("osc_profile:rho=2,lambda=1,p=2,q=0");
	double periods =
	    (std::log(e.grid.sigma_max) - std::log(e.grid.sigma_min)) / (2 * std::numbers::pi);
	auto [rho, lambda] = order_pair(e.source, 2, 0, e.grid);
	o.pass = e.grid.spacing == GridSpec::Spacing::log && periods >= 3 &&
	         std::abs(rho.value - 2) <= 1e-2 && std::abs(lambda.value - 1) <= 1e-2;
	o.detail = "rho " + fmt(rho.value) + ", lambda " + fmt(lambda.value) + " over " +
	           fmt(periods) + " periods";
	return o;
}

// 5. fixed triple batch; non-vacuous chains pass, link by link
Outcome theorem_suite()
{
	Outcome o;
	auto batch = load_batch(data_dir + "/theorem_suite.json");
	std::set<std::string> triples;
	for (const auto &inst : batch)
		triples.insert(inst.triple.key());
	auto reports = check_batch(batch);

	std::map<std::string, int> checked;
	int failed = 0, vacuous = 0, links = 0;
	for (const auto &r : reports) {
		if (r.verdict == Verdict::vacuous) {
			++vacuous;
			continue;
		}
		++checked[r.theorem_id];
		bool ok = r.verdict == Verdict::pass;
		for (const auto &c : r.chains)
			for (std::size_t i = 0; i < c.links.size(); ++i) {
				const auto &a = c.entries[i].v, &b = c.entries[i + 1].v;
				double allowed = r.tolerance + a.half_width() + b.half_width();
				double diff = c.links[i].rel == Relation::le ? b.value - a.value
				                                             : -std::abs(b.value - a.value);
				if (r.theorem_id == "C7" || r.theorem_id == "C8")
					ok = ok && c.links[i].holds;
				else
					ok = ok && diff >= -allowed;
				++links;
			}
		if (!ok) {
			++failed;
			std::cerr << "  violated: " << r.theorem_id << " on " << r.f << " | " << r.g
			          << " | " << r.h << '\n';
		}
	}
	// each named family of results must actually have been exercised
	std::string missing;
	for (const char *id : {"T1", "Tt1", "Ct1", "Tt2", "Ct2", "Tt3", "Ct3", "Tt4", "Ct4",
	                       "T41", "T42", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"})
		if (!checked.count(id))
			missing += std::string(" ") + id;
	o.pass = failed == 0 && triples.size() >= 20 && missing.empty();
	o.detail = std::to_string(triples.size()) + " triples, " +
	           std::to_string(reports.size() - vacuous) + " non-vacuous checks (" +
	           std::to_string(links) + " links), " + std::to_string(vacuous) +
	           " vacuous, " + std::to_string(failed) + " failed";
	if (!missing.empty())
		o.detail += "; never exercised:" + missing;
	return o;
}

// 6. rho(p+1, q+1) = 1 for entries with finite nonzero rho(p, q)
Outcome shift_property()
{
	Outcome o;
	double worst = 0;
	int n = 0;
	for (const auto &id : corpus_ids()) {
		auto e = instantiate(id);
		auto [p, q] = e.index_pair;
		auto base = order_pair(e.source, p, q, e.grid).first;
		if (!std::isfinite(base.value) || base.value <= 0)
			continue;
		auto shifted = order_pair(e.source, p + 1, q + 1, e.grid).first;
		double err = std::abs(shifted.value - 1);
		worst = std::max(worst, err);
		o.pass = o.pass && err <= 5e-2;
		++n;
	}
	o.pass = o.pass && n > 0;
	o.detail = std::to_string(n) + " entries, max |rho - 1| " + fmt(worst);
	return o;
}

// 7. seeded eventually-periodic sweep
Outcome oracle_rules()
{
	auto t0 = Clock::now();
	SweepOptions opts;
	opts.instances = 10000;
	opts.seed = 7;
	auto r = oracle_sweep(opts);
	double secs = seconds_since(t0);
	Outcome o;
	o.pass = r.instances == 10000 && r.violations == 0 && r.collapse_failures == 0 &&
	         secs < 5;
	o.detail = std::to_string(r.violations) + " violations in " +
	           std::to_string(r.instances) + " instances, " + fmt(secs) + " s";
	return o;
}

// 8. level-index round trip, ordering and log/exp inverse
Outcome level_index_properties()
{
	std::mt19937_64 rng(20261016);
	std::uniform_real_distribution<double> u(-1e6, 1e6);
	std::uniform_int_distribution<int> level(0, 6), depth(0, 5);
	std::uniform_real_distribution<double> mant(1.0, std::numbers::e);
	const int trials = 100000;
	int failures = 0, inverse_checked = 0;
	for (int i = 0; i < trials; ++i) {
		double a = u(rng), b = u(rng);
		// round trip
		if (std::abs(to_real(from_real(a)) - a) > 1e-12 * std::max(1.0, std::abs(a)))
			++failures;
		// ordering agrees with the reals
		auto cmp = compare(from_real(a), from_real(b));
		if ((a < b) != (cmp < 0) || (a > b) != (cmp > 0))
			++failures;
		// exp^[k] log^[k] x = x for a random tower x
		int lv = level(rng);
		double m = mant(rng);
		ExtReal x = lv == 0 ? from_real(m) : ExtReal{lv, m};
		int k = depth(rng);
		try {
			ExtReal back = exp_iter(log_iter(x, k), k);
			++inverse_checked;
			if (back.level != x.level ||
			    std::abs(back.mantissa - x.mantissa) > (k + 1) * 1e-14 * x.mantissa)
				++failures;
		} catch (const DomainError &) {
		}
	}
	Outcome o;
	o.pass = failures == 0 && inverse_checked > trials / 2;
	o.detail = std::to_string(trials) + " trials (" + std::to_string(inverse_checked) +
	           " inverse checks), " + std::to_string(failures) + " failures";
	return o;
}

// 9. |M^{-1}(M(sigma)) - sigma| <= 1e-9 on sigma = 1..30
Outcome inversion_identity()
{
	Outcome o;
	double worst = 0;
	int points = 0, outside = 0;
	for (const auto &id : corpus_ids()) {
		auto e = instantiate(id);
		for (auto s : {Surrogate::lower, Surrogate::upper}) {
			ProfileSource src{e.source, s};
			for (int sigma = 1; sigma <= 30; ++sigma) {
				if (sigma < e.source->sigma_floor()) {
					++outside;
					continue;
				}
				double err = std::abs(invert_modulus(src, src(sigma)) - sigma);
				worst = std::max(worst, err);
				o.pass = o.pass && err <= 1e-9;
				++points;
			}
		}
	}
	o.detail = std::to_string(points) + " points, max |err| " + fmt(worst);
	if (outside)
		o.detail += ", " + std::to_string(outside) + " below the source domain skipped";
	return o;
}

struct CliRun {
	int code = -1;
	std::string out;
};

CliRun run_cli(const std::string &args)
{
	CliRun r;
	FILE *pipe = popen((cli + " " + args + " 2>&1").c_str(), "r");
	if (!pipe)
		return r;
	std::array<char, 4096> buf;
	std::size_t n;
	while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
		r.out.append(buf.data(), n);
	int status = pclose(pipe);
	r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
	return r;
}

// 10. the CLI suite twice, byte for byte
Outcome determinism()
{
	const std::vector<std::string> suite{
	    "corpus list",
	    "corpus describe osc_profile:rho=2,lambda=1,p=2,q=0",
	    "validate --spec " + data_dir + "/specs/expexp_1_3.json",
	    "profile --spec " + data_dir + "/specs/table_geometric.json --format json",
	    "profile --spec expexp:a=1,c=3 --sigma 5:30:50",
	    "profile --spec osc_profile:rho=2,lambda=1,p=2,q=0 --format plot",
	    "indicator --spec expexp:a=2,c=1 --p 2 --q 0 --sigma 5:30:200",
	    "indicator --spec " + data_dir + "/specs/osc_2_1.json",
	    "relative --f expexp:a=3,c=2 --g expexp:a=1,c=1",
	    "detect --spec tower_profile:k=3,rho=2,q=1",
	    "check --batch " + data_dir + "/theorem_suite.json --tol 2e-2",
	    "oracle --instances 10000 --seed 7 --format json",
	};
	Outcome o;
	std::size_t bytes = 0;
	int mismatched = 0, bad_exit = 0;
	std::vector<CliRun> first;
	for (const auto &args : suite)
		first.push_back(run_cli(args));
	for (std::size_t i = 0; i < suite.size(); ++i) {
		auto again = run_cli(suite[i]);
		bytes += again.out.size();
		if (again.out != first[i].out || again.code != first[i].code) {
			++mismatched;
			std::cerr << "  differs: " << suite[i] << '\n';
		}
		if (first[i].code != 0) {
			++bad_exit;
			std::cerr << "  exit " << first[i].code << ": " << suite[i] << '\n';
		}
	}
	o.pass = mismatched == 0 && bad_exit == 0;
	o.detail = std::to_string(suite.size()) + " commands, " + std::to_string(bytes) +
	           " bytes, " + std::to_string(mismatched) + " differing, " +
	           std::to_string(bad_exit) + " nonzero exits";
	return o;
}

} // namespace

int main()
{
	const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
	    {"order recovery", order_recovery},
	    {"type recovery", type_recovery},
	    {"relative order and type", relative_recovery},
	    {"irregular profile", irregular_recovery},
	    {"theorem suite", theorem_suite},
	    {"shift property", shift_property},
	    {"oracle sweep", oracle_rules},
	    {"level-index properties", level_index_properties},
	    {"inversion identity", inversion_identity},
	    {"CLI determinism", determinism},
	};
	int failed = 0;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		Outcome o;
		auto t0 = Clock::now();
		try {
			o = criteria[i].second();
		} catch (const std::exception &e) {
			o = {false, std::string("error: ") + e.what()};
		}
		failed += !o.pass;
		std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". "
		          << criteria[i].first << ": " << o.detail << " [" << fmt(seconds_since(t0))
		          << " s]" << std::endl;
	}
	std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
	return failed == 0 ? 0 : 1;
}
