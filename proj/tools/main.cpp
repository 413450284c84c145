#include "dsg/corpus.hpp"
#include "dsg/errors.hpp"
#include "dsg/growth.hpp"
#include "dsg/indicators.hpp"
#include "dsg/oracle.hpp"
#include "dsg/series.hpp"
#include "dsg/spec_io.hpp"
#include "dsg/theorems.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace dsg;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, check_failed = 1, usage = 2, numeric = 3 };

std::string num(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

void print_table(const std::vector<std::string> &header,
                 const std::vector<std::vector<std::string>> &rows)
{
	std::vector<std::size_t> width(header.size());
	for (std::size_t c = 0; c < header.size(); ++c) {
		width[c] = header[c].size();
		for (const auto &r : rows)
			width[c] = std::max(width[c], r[c].size());
	}
	auto line = [&](const std::vector<std::string> &cells) {
		std::string s;
		for (std::size_t c = 0; c < cells.size(); ++c) {
			s += cells[c];
			if (c + 1 < cells.size())
				s += std::string(width[c] - cells[c].size() + 2, ' ');
		}
		std::cout << s << '\n';
	};
	line(header);
	for (const auto &r : rows)
		line(r);
}

ojson parsed(const std::string &compact) { return ojson::parse(compact); }

void print_estimates(const std::vector<IndicatorEstimate> &es)
{
	std::vector<std::vector<std::string>> rows;
	for (const auto &e : es)
		rows.push_back({to_string(e.kind, e.relative),
		                std::to_string(e.p) + "," + std::to_string(e.q), num(e.value),
		                num(e.lo), num(e.hi), e.converged ? "yes" : "no"});
	print_table({"indicator", "(p,q)", "value", "lo", "hi", "converged"}, rows);
}

GridSpec grid_or(const std::string &text, const GridSpec &fallback)
{
	return text.empty() ? fallback : parse_grid(text);
}

// shared by the estimating subcommands
struct EstimateFlags {
	std::string sigma;
	double window = 0.4;
	std::string format = "json";

	TailOptions tail() const
	{
		TailOptions t;
		t.window_fraction = window;
		return t;
	}
};

void add_estimate_flags(CLI::App *cmd, EstimateFlags &f)
{
	cmd->add_option("--sigma", f.sigma, "grid min:max:count[:log]; default per spec");
	cmd->add_option("--window", f.window, "tail window as a fraction of the grid")
	    ->check(CLI::Range(0.05, 1.0));
	cmd->add_option("--format", f.format, "json or table")
	    ->check(CLI::IsMember({"json", "table"}));
}

// validate ---------------------------------------------------------------

int cmd_validate(const std::string &ref, int n_max)
{
	CorpusEntry e = resolve_spec(ref);
	ojson j;
	j["spec"] = e.id;
	if (const SeriesSpec *s = series_of(*e.source)) {
		auto r = validate(*s, n_max);
		j["kind"] = "series";
		j["n_checked"] = r.n_checked;
		j["monotone_exponents"] = r.monotone_ok;
		j["d_estimate"] = r.d_estimate;
		j["coefficient_decay_trend"] = r.coeff_decay_trend;
		j["verdict"] = to_string(r.verdict);
		if (!r.cause.empty())
			j["cause"] = r.cause;
		std::cout << j.dump(2) << '\n';
		return r.verdict == ValidationReport::Verdict::fail ? check_failed : ok;
	}
	// profile rules have no coefficients; check they increase on the grid
	auto prof = sample_profile({e.source, Surrogate::upper}, e.grid);
	bool increasing = true;
	for (std::size_t i = 1; i < prof.log_m.size(); ++i)
		increasing = increasing && prof.log_m[i - 1] < prof.log_m[i];
	j["kind"] = "profile";
	j["grid"] = e.grid.key();
	j["increasing"] = increasing;
	j["verdict"] = increasing ? "pass" : "fail";
	std::cout << j.dump(2) << '\n';
	return increasing ? ok : check_failed;
}

// profile ----------------------------------------------------------------

int cmd_profile(const std::string &ref, const std::string &sigma,
                const std::string &surrogate, const std::string &format,
                std::optional<int> p, std::optional<int> q, std::string cache)
{
	CorpusEntry e = resolve_spec(ref);
	ProfileSource src{e.source, surrogate == "lower" ? Surrogate::lower : Surrogate::upper};
	GridSpec grid = grid_or(sigma, e.grid);

	if (format == "plot") {
		int pp = p.value_or(e.index_pair.p), qq = q.value_or(e.index_pair.q);
		auto seq = ratio_sequence(src, RatioKind::order, pp, qq, std::nullopt,
		                          grid.points());
		std::cout << "# sigma log^[" << pp << "]M/log^[" << qq << "]sigma  (" << e.id
		          << ", " << to_string(src.surrogate) << ")\n";
		char buf[64];
		for (const auto &pt : seq.points) {
			std::snprintf(buf, sizeof buf, "%.17g %.17g\n", pt.sigma, pt.r);
			std::cout << buf;
		}
		return ok;
	}

	if (cache.empty())
		if (const char *env = std::getenv("DSG_CACHE_DIR"))
			cache = env;
	GrowthProfile prof = cache.empty() ? sample_profile(src, grid)
	                                   : sample_profile_cached(src, grid, cache);
	if (format == "csv") {
		write_profile_csv(std::cout, prof);
		return ok;
	}
	ojson j;
	j["source"] = prof.source_key;
	j["surrogate"] = to_string(prof.surrogate);
	j["grid"] = prof.grid.key();
	ojson pts = ojson::array();
	for (std::size_t i = 0; i < prof.sigma.size(); ++i)
		pts.push_back({{"sigma", prof.sigma[i]},
		               {"level", prof.log_m[i].level},
		               {"mantissa", prof.log_m[i].mantissa}});
	j["points"] = pts;
	std::cout << j.dump(2) << '\n';
	return ok;
}

// indicator --------------------------------------------------------------

int cmd_indicator(const std::string &ref, std::optional<int> p, std::optional<int> q,
                  const EstimateFlags &flags)
{
	CorpusEntry e = resolve_spec(ref);
	int pp = p.value_or(e.index_pair.p), qq = q.value_or(e.index_pair.q);
	GridSpec grid = grid_or(flags.sigma, e.grid);
	auto tail = flags.tail();

	std::vector<IndicatorEstimate> es;
	auto [rho, lambda] = order_pair(e.source, pp, qq, grid, tail);
	es.push_back(rho);
	es.push_back(lambda);
	std::string skipped;
	if (admissible(rho, 1e-3)) {
		auto [d, dl] = type_pair(e.source, pp, qq, rho.value, grid, tail);
		es.push_back(d);
		es.push_back(dl);
	} else {
		skipped = "order outside (0, inf): types undefined";
	}
	if (admissible(lambda, 1e-3)) {
		auto [tb, t] = weak_type_pair(e.source, pp, qq, lambda.value, grid, tail);
		es.push_back(tb);
		es.push_back(t);
	} else if (skipped.empty()) {
		skipped = "lower order outside (0, inf): weak types undefined";
	}

	if (flags.format == "table") {
		print_estimates(es);
		return ok;
	}
	ojson j;
	j["spec"] = e.id;
	j["p"] = pp;
	j["q"] = qq;
	j["grid"] = grid.key();
	for (const auto &x : es)
		j[to_string(x.kind, false)] = parsed(to_json(x));
	if (!skipped.empty())
		j["note"] = skipped;
	std::cout << j.dump(2) << '\n';
	return ok;
}

// relative ---------------------------------------------------------------

int cmd_relative(const std::string &fref, const std::string &gref, int p, int q,
                 const std::string &form, const EstimateFlags &flags)
{
	CorpusEntry f = resolve_spec(fref), g = resolve_spec(gref);
	GridSpec grid = grid_or(flags.sigma, f.grid);
	RelativeOptions opts;
	opts.form = form == "dual" ? RelativeForm::dual : RelativeForm::direct;
	opts.tail = flags.tail();
	auto r = relative_indicators(f.source, g.source, p, q, grid, opts);

	std::vector<IndicatorEstimate> es{r.order, r.lower_order};
	for (const auto *x : {&r.type, &r.lower_type, &r.weak_tau_bar, &r.weak_tau})
		if (*x)
			es.push_back(**x);
	if (flags.format == "table") {
		print_estimates(es);
		return ok;
	}
	ojson j;
	j["f"] = f.id;
	j["g"] = g.id;
	j["p"] = p;
	j["q"] = q;
	j["grid"] = grid.key();
	j["form"] = form;
	for (const auto &x : es)
		j[to_string(x.kind, false)] = parsed(to_json(x));
	if (!r.pair_note.empty())
		j["note"] = r.pair_note;
	std::cout << j.dump(2) << '\n';
	return ok;
}

// detect -----------------------------------------------------------------

int cmd_detect(const std::string &ref, const std::string &gref, int m,
               const EstimateFlags &flags)
{
	CorpusEntry f = resolve_spec(ref);
	GridSpec grid = grid_or(flags.sigma, f.grid);
	DetectOptions opts;
	opts.tail = flags.tail();
	std::optional<CorpusEntry> g;
	if (!gref.empty())
		g = resolve_spec(gref);
	DetectionResult d = g ? detect_relative_index_pair(f.source, g->source, m, grid, opts)
	                      : detect_index_pair(f.source, grid, opts);
	if (flags.format == "table") {
		std::cout << "index pair (" << d.pair.p << "," << d.pair.q << ")\n";
		print_estimates(d.evidence);
		return ok;
	}
	ojson j;
	j["spec"] = f.id;
	if (g) {
		j["relative_to"] = g->id;
		j["m"] = m;
	}
	j["grid"] = grid.key();
	j["pair"] = {d.pair.p, d.pair.q};
	j["order"] = parsed(to_json(d.order));
	ojson ev = ojson::array();
	for (const auto &x : d.evidence)
		ev.push_back(parsed(to_json(x)));
	j["evidence"] = ev;
	std::cout << j.dump(2) << '\n';
	return ok;
}

// check ------------------------------------------------------------------

int cmd_check(const std::string &path, std::optional<double> tol,
              std::optional<double> eps, const std::string &format)
{
	auto batch = load_batch(path);
	for (auto &inst : batch) {
		if (tol)
			inst.tolerance = *tol;
		if (eps)
			inst.eps = *eps;
	}
	auto reports = check_batch(batch);
	std::cout << (format == "table" ? to_table(reports) : to_json(reports) + "\n");
	for (const auto &r : reports)
		if (r.verdict == Verdict::fail)
			return check_failed;
	return ok;
}

// oracle -----------------------------------------------------------------

int cmd_oracle(const SweepOptions &opts, const std::string &format)
{
	auto r = oracle_sweep(opts);
	if (format == "json")
		std::cout << ojson::parse(to_json(r, opts)).dump(2) << '\n';
	else {
		std::cout << r.instances << " instances, seed " << opts.seed << ": "
		          << r.violations << " violations\n";
		for (const auto &f : r.failures)
			std::cout << "  " << f << '\n';
	}
	return r.violations == 0 && r.collapse_failures == 0 ? ok : check_failed;
}

// corpus -----------------------------------------------------------------

int cmd_corpus_list(const std::string &format)
{
	std::vector<CorpusEntry> es;
	for (const auto &id : corpus_ids())
		es.push_back(instantiate(id));
	if (format == "table") {
		std::vector<std::vector<std::string>> rows;
		for (const auto &e : es)
			rows.push_back({e.id,
			                "(" + std::to_string(e.index_pair.p) + "," +
			                    std::to_string(e.index_pair.q) + ")",
			                e.regular ? "regular" : "irregular", e.grid.key()});
		print_table({"id", "index pair", "growth", "grid"}, rows);
		return ok;
	}
	ojson j = ojson::array();
	for (const auto &e : es)
		j.push_back(parsed(describe_json(e)));
	std::cout << j.dump(2) << '\n';
	return ok;
}

int cmd_corpus_describe(const std::string &ref, const std::string &format)
{
	CorpusEntry e = resolve_spec(ref);
	if (format == "table") {
		std::cout << e.id << "  index pair (" << e.index_pair.p << "," << e.index_pair.q
		          << ")  " << (e.regular ? "regular" : "irregular") << "  grid "
		          << e.grid.key() << '\n';
		std::vector<std::vector<std::string>> rows;
		for (const auto &v : e.analytic)
			rows.push_back({to_string(v.kind, false),
			                std::to_string(v.p) + "," + std::to_string(v.q),
			                num(v.value), v.note});
		print_table({"indicator", "(p,q)", "value", "closed form"}, rows);
		return ok;
	}
	std::cout << parsed(describe_json(e)).dump(2) << '\n';
	return ok;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"growth indicators of Dirichlet series and inequality checks", "dsg"};
	app.require_subcommand(1);

	std::string spec, gspec, batch, surrogate = "upper", profile_format = "csv";
	std::string cache, form = "direct", oracle_format = "text";
	std::optional<int> p, q;
	int rel_p = 0, rel_q = 0, m = 0, n_max = 4096;
	std::optional<double> tol, eps;
	EstimateFlags flags;
	SweepOptions sweep;

	auto *validate_cmd = app.add_subcommand("validate", "check a series spec");
	validate_cmd->add_option("--spec", spec, "corpus id, JSON file or inline JSON")->required();
	validate_cmd->add_option("--n-max", n_max, "coefficients to inspect")
	    ->check(CLI::PositiveNumber);

	auto *profile_cmd = app.add_subcommand("profile", "sample log M on a grid");
	profile_cmd->add_option("--spec", spec)->required();
	profile_cmd->add_option("--sigma", flags.sigma);
	profile_cmd->add_option("--surrogate", surrogate)->check(CLI::IsMember({"upper", "lower"}));
	profile_cmd->add_option("--format", profile_format, "csv, json or plot")
	    ->check(CLI::IsMember({"csv", "json", "plot"}));
	profile_cmd->add_option("--p", p, "plot: iterated logs of M");
	profile_cmd->add_option("--q", q, "plot: iterated logs of sigma");
	profile_cmd->add_option("--cache", cache, "profile cache directory (else $DSG_CACHE_DIR)");

	auto *indicator_cmd = app.add_subcommand("indicator", "order, type and weak type");
	indicator_cmd->add_option("--spec", spec)->required();
	indicator_cmd->add_option("--p", p)->check(CLI::NonNegativeNumber);
	indicator_cmd->add_option("--q", q)->check(CLI::NonNegativeNumber);
	add_estimate_flags(indicator_cmd, flags);

	auto *relative_cmd = app.add_subcommand("relative", "indicators of f measured by g");
	relative_cmd->add_option("--f", spec)->required();
	relative_cmd->add_option("--g", gspec)->required();
	relative_cmd->add_option("--p", rel_p)->check(CLI::NonNegativeNumber);
	relative_cmd->add_option("--q", rel_q)->check(CLI::NonNegativeNumber);
	relative_cmd->add_option("--form", form)->check(CLI::IsMember({"direct", "dual"}));
	add_estimate_flags(relative_cmd, flags);

	auto *detect_cmd = app.add_subcommand("detect", "find the index pair");
	detect_cmd->add_option("--spec", spec)->required();
	detect_cmd->add_option("--g", gspec, "detect the relative pair with respect to g");
	detect_cmd->add_option("--m", m, "relative detection: shared first index")
	    ->check(CLI::NonNegativeNumber);
	add_estimate_flags(detect_cmd, flags);

	auto *check_cmd = app.add_subcommand("check", "run theorem checks on a batch");
	check_cmd->add_option("--batch", batch)->required()->check(CLI::ExistingFile);
	check_cmd->add_option("--tol", tol, "override every instance tolerance")
	    ->check(CLI::PositiveNumber);
	check_cmd->add_option("--eps", eps)->check(CLI::Range(1e-12, 0.999));
	check_cmd->add_option("--format", flags.format)->check(CLI::IsMember({"json", "table"}));

	auto *oracle_cmd = app.add_subcommand("oracle", "limsup/liminf difference-rule sweep");
	oracle_cmd->add_option("--instances", sweep.instances)->check(CLI::PositiveNumber);
	oracle_cmd->add_option("--seed", sweep.seed);
	oracle_cmd->add_option("--format", oracle_format)->check(CLI::IsMember({"text", "json"}));

	auto *corpus_cmd = app.add_subcommand("corpus", "built-in families");
	corpus_cmd->require_subcommand(1);
	auto *list_cmd = corpus_cmd->add_subcommand("list");
	list_cmd->add_option("--format", flags.format)->check(CLI::IsMember({"json", "table"}));
	auto *describe_cmd = corpus_cmd->add_subcommand("describe");
	describe_cmd->add_option("id", spec)->required();
	describe_cmd->add_option("--format", flags.format)->check(CLI::IsMember({"json", "table"}));

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int code = app.exit(e);
		return code == 0 ? ok : usage;
	}

	try {
		if (*validate_cmd)
			return cmd_validate(spec, n_max);
		if (*profile_cmd)
			return cmd_profile(spec, flags.sigma, surrogate, profile_format, p, q, cache);
		if (*indicator_cmd)
			return cmd_indicator(spec, p, q, flags);
		if (*relative_cmd)
			return cmd_relative(spec, gspec, rel_p, rel_q, form, flags);
		if (*detect_cmd)
			return cmd_detect(spec, gspec, m, flags);
		if (*check_cmd)
			return cmd_check(batch, tol, eps, flags.format);
		if (*oracle_cmd)
			return cmd_oracle(sweep, oracle_format);
		if (*list_cmd)
			return cmd_corpus_list(flags.format);
		if (*describe_cmd)
			return cmd_corpus_describe(spec, flags.format);
	} catch (const SchemaError &e) {
		std::cerr << "dsg: " << e.what() << '\n';
		return usage;
	} catch (const InvalidInput &e) {
		std::cerr << "dsg: " << e.what() << '\n';
		return usage;
	} catch (const std::exception &e) {
		std::cerr << "dsg: " << e.what() << '\n';
		return numeric;
	}
	return usage;
}
