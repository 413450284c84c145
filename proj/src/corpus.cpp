#include "dsg/corpus.hpp"

#include "dsg/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace dsg {

namespace {

constexpr double kPi = std::numbers::pi;

// shortest decimal that reads back to the same double
std::string short_num(double v)
{
	char buf[40];
	for (int prec = 1; prec <= 17; ++prec) {
		std::snprintf(buf, sizeof buf, "%.*g", prec, v);
		if (std::strtod(buf, nullptr) == v)
			break;
	}
	return buf;
}

const std::map<std::string, std::vector<std::string>> kFamilyParams = {
    {"expexp", {"a", "c"}},
    {"tower_profile", {"k", "rho", "q"}},
    {"osc_profile", {"rho", "lambda", "p", "q"}},
};

std::string make_id(const std::string &family,
                    const std::map<std::string, double> &params)
{
	std::string id = family + ":";
	bool first = true;
	for (const auto &name : kFamilyParams.at(family)) {
		id += (first ? "" : ",") + name + "=" + short_num(params.at(name));
		first = false;
	}
	return id;
}

int as_index(const std::map<std::string, double> &params, const std::string &name,
             int lo, int hi)
{
	double v = params.at(name);
	if (v != std::floor(v) || v < lo || v > hi)
		throw InvalidInput(name + " must be an integer in [" + std::to_string(lo) +
		                   ", " + std::to_string(hi) + "]");
	return static_cast<int>(v);
}

double positive(const std::map<std::string, double> &params, const std::string &name)
{
	double v = params.at(name);
	if (!(v > 0.0) || !std::isfinite(v))
		throw InvalidInput(name + " must be positive and finite");
	return v;
}

// log^[q] sigma in plain doubles
double iterated_log(double sigma, int q)
{
	for (int i = 0; i < q; ++i) {
		if (!(sigma > 0.0))
			throw DomainError("iterated log of a non-positive abscissa");
		sigma = std::log(sigma);
	}
	return sigma;
}

// smallest abscissa where log^[q] sigma is defined
double domain_floor(int q)
{
	if (q == 0)
		return 0.0;
	double edge = 0.0;
	for (int i = 1; i < q; ++i)
		edge = std::exp(edge);
	return q == 1 ? std::numeric_limits<double>::min()
	              : std::nextafter(edge, std::numeric_limits<double>::infinity());
}

void add(CorpusEntry &e, IndicatorKind kind, int p, int q, double v,
         std::string note)
{
	e.analytic.push_back({kind, p, q, v, std::move(note)});
}

void add_orders(CorpusEntry &e, int p, int q, double rho, double lambda,
                const std::string &note)
{
	add(e, IndicatorKind::order, p, q, rho, note);
	add(e, IndicatorKind::lower_order, p, q, lambda, note);
}

// shifted pairs approach 1 only like 1/log^[q] sigma
void add_shifted(CorpusEntry &e, int p, int q, const std::string &note)
{
	for (auto k : {IndicatorKind::order, IndicatorKind::lower_order})
		e.analytic.push_back({k, p, q, 1.0, note, 5e-2});
}

void add_types(CorpusEntry &e, int p, int q, double v, const std::string &note)
{
	for (auto k : {IndicatorKind::type, IndicatorKind::lower_type,
	               IndicatorKind::weak_type_tau, IndicatorKind::weak_type_tau_bar})
		add(e, k, p, q, v, note);
}

CorpusEntry make_expexp(const std::map<std::string, double> &params)
{
	double a = positive(params, "a"), c = positive(params, "c");
	CorpusEntry e;
	e.family = "expexp";
	e.params = params;
	e.source = series_source(expexp_spec(a, c));
	e.index_pair = {2, 0};
	double top = std::min(30.0, (600.0 - std::max(0.0, std::log(c))) / a);
	e.grid = {std::min(5.0, top / 6.0), top, 64, GridSpec::Spacing::linear};
	add_orders(e, 2, 0, a, a, "log M = c e^{a sigma} + o(1), so log log M / sigma -> a");
	add_types(e, 2, 0, c, "log M / (e^sigma)^a -> c");
	add_shifted(e, 3, 1, "log(a sigma + log c) / log sigma -> 1");
	return e;
}

CorpusEntry make_tower(const std::map<std::string, double> &params)
{
	int k = as_index(params, "k", 1, 6);
	int q = as_index(params, "q", 0, 5);
	double rho = positive(params, "rho");
	if (!(k >= q + 1 || (k == 1 && q == 1)))
		throw InvalidInput("tower_profile needs k >= q + 1 (or k = q = 1)");
	CorpusEntry e;
	e.family = "tower_profile";
	e.params = params;
	e.index_pair = {k, q};
	std::string key = "tower_profile:k=" + std::to_string(k) +
	                  ",rho=" + short_num(rho) + ",q=" + std::to_string(q);
	e.source = synthetic_source(
	    key,
	    [k, q, rho](double s) {
		    return exp_iter(from_real(rho * iterated_log(s, q)), k - 1);
	    },
	    domain_floor(q));
	e.grid = {10.0, 1e8, 64, GridSpec::Spacing::log};
	add_orders(e, k, q, rho, rho, "rule log^[k] M = rho log^[q] sigma");
	add_types(e, k, q, 1.0,
	          "exp(rho log^[q] sigma) / (log^[q-1] sigma)^rho = 1 exactly");
	add_shifted(e, k + 1, q + 1, "log(rho log^[q] sigma) / log^[q+1] sigma -> 1");
	return e;
}

CorpusEntry make_osc(const std::map<std::string, double> &params)
{
	double rho = positive(params, "rho"), lambda = positive(params, "lambda");
	int p = as_index(params, "p", 1, 6);
	int q = as_index(params, "q", 0, 0);
	if (lambda > rho)
		throw InvalidInput("osc_profile needs lambda <= rho");
	// d/ds[(m0 + m1 sin log s) s] = m0 + m1 (sin + cos) >= m0 - sqrt(2) m1
	if (!(rho < (3.0 + 2.0 * std::sqrt(2.0)) * lambda))
		throw InvalidInput("osc_profile is not increasing unless rho < (3 + 2 sqrt 2) lambda");
	double m0 = 0.5 * (rho + lambda), m1 = 0.5 * (rho - lambda);
	CorpusEntry e;
	e.family = "osc_profile";
	e.params = params;
	e.index_pair = {p, q};
	e.regular = rho == lambda;
	e.tolerance = 1e-2;
	std::string key = "osc_profile:rho=" + short_num(rho) + ",lambda=" +
	                  short_num(lambda) + ",p=" + std::to_string(p) + ",q=0";
	e.source = synthetic_source(
	    key,
	    [p, m0, m1](double s) {
		    double v = (m0 + m1 * std::sin(std::log(s))) * s;
		    return exp_iter(from_real(v), p - 1);
	    },
	    std::numeric_limits<double>::min());
	// four periods of sin(log sigma), log-uniform; started late enough that
	// the shifted ratio 1 + log v / log sigma sits within 5e-2 of its limit
	e.grid = {std::exp(8.0), std::exp(8.0 + 8.0 * kPi), 160, GridSpec::Spacing::log};
	add_orders(e, p, 0, rho, lambda,
	           "sup / inf of m0 + m1 sin log sigma are m0 + m1 = rho, m0 - m1 = lambda");
	add_shifted(e, p + 1, 1, "log((m0 + m1 sin log sigma) sigma) / log sigma -> 1");
	return e;
}

// log^[level] M = slope sigma + offset + o(1), slope possibly oscillating
// between lo and hi
struct LinearScale {
	int level;
	double slope_lo;
	double slope_hi;
	double offset;
};

std::optional<LinearScale> linear_scale(const CorpusEntry &e)
{
	if (e.family == "expexp")
		return LinearScale{2, e.params.at("a"), e.params.at("a"),
		                   std::log(e.params.at("c"))};
	if (e.family == "tower_profile" && e.params.at("q") == 0.0)
		return LinearScale{static_cast<int>(e.params.at("k")), e.params.at("rho"),
		                   e.params.at("rho"), 0.0};
	if (e.family == "osc_profile")
		return LinearScale{static_cast<int>(e.params.at("p")), e.params.at("lambda"),
		                   e.params.at("rho"), 0.0};
	return std::nullopt;
}

} // namespace

std::vector<std::string> corpus_ids()
{
	return {
	    "expexp:a=1,c=1",
	    "expexp:a=2,c=1",
	    "expexp:a=1,c=2",
	    "expexp:a=1,c=3",
	    "expexp:a=1,c=5",
	    "expexp:a=1,c=6",
	    "expexp:a=2,c=3",
	    "expexp:a=3,c=1",
	    "expexp:a=3,c=2",
	    "expexp:a=0.5,c=1",
	    "tower_profile:k=2,rho=1,q=0",
	    "tower_profile:k=2,rho=2,q=0",
	    "tower_profile:k=3,rho=0.5,q=1",
	    "tower_profile:k=3,rho=2,q=1",
	    "tower_profile:k=1,rho=2,q=1",
	    "osc_profile:rho=2,lambda=1,p=2,q=0",
	    "osc_profile:rho=3,lambda=1,p=2,q=0",
	};
}

CorpusEntry instantiate(const std::string &family,
                        const std::map<std::string, double> &params)
{
	auto it = kFamilyParams.find(family);
	if (it == kFamilyParams.end())
		throw InvalidInput("unknown corpus family '" + family + "'");
	for (const auto &name : it->second)
		if (!params.count(name))
			throw InvalidInput(family + " needs parameter '" + name + "'");
	for (const auto &[name, v] : params) {
		bool known = false;
		for (const auto &n : it->second)
			known = known || n == name;
		if (!known)
			throw InvalidInput(family + " has no parameter '" + name + "'");
	}
	CorpusEntry e = family == "expexp"          ? make_expexp(params)
	                : family == "tower_profile" ? make_tower(params)
	                                            : make_osc(params);
	e.id = make_id(family, params);
	return e;
}

CorpusEntry instantiate(const std::string &id)
{
	auto colon = id.find(':');
	if (colon == std::string::npos)
		throw InvalidInput("corpus id '" + id + "' must look like family:key=value,...");
	std::string family = id.substr(0, colon);
	std::map<std::string, double> params;
	std::string rest = id.substr(colon + 1);
	std::size_t pos = 0;
	while (pos <= rest.size() && !rest.empty()) {
		auto comma = rest.find(',', pos);
		std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos
		                                                                : comma - pos);
		auto eq = item.find('=');
		if (eq == std::string::npos)
			throw InvalidInput("corpus id '" + id + "': expected key=value, got '" +
			                   item + "'");
		std::string key = item.substr(0, eq), val = item.substr(eq + 1);
		char *end = nullptr;
		double v = std::strtod(val.c_str(), &end);
		if (val.empty() || *end != '\0')
			throw InvalidInput("corpus id '" + id + "': '" + val + "' is not a number");
		if (!params.emplace(key, v).second)
			throw InvalidInput("corpus id '" + id + "': duplicate key '" + key + "'");
		if (comma == std::string::npos)
			break;
		pos = comma + 1;
	}
	return instantiate(family, params);
}

CorpusEntry table_entry(const SeriesSpec &spec)
{
	CorpusEntry e;
	e.id = spec.key;
	e.family = "table";
	e.source = series_source(spec);
	e.grid = {0.0, 10.0, 64, GridSpec::Spacing::linear};
	return e;
}

std::optional<double> analytic_value(const CorpusEntry &e, IndicatorKind kind,
                                     int p, int q)
{
	for (const auto &v : e.analytic)
		if (v.kind == kind && v.p == p && v.q == q)
			return v.value;
	return std::nullopt;
}

std::optional<AnalyticValue> relative_analytic(const CorpusEntry &f,
                                               const CorpusEntry &g,
                                               IndicatorKind kind, int p, int q)
{
	for (const auto &v : relative_analytic_table(f, g))
		if (v.kind == kind && v.p == p && v.q == q)
			return v;
	return std::nullopt;
}

std::vector<AnalyticValue> relative_analytic_table(const CorpusEntry &f,
                                                   const CorpusEntry &g)
{
	std::vector<AnalyticValue> out;
	auto push = [&](IndicatorKind k, int p, int q, double v, const std::string &note) {
		out.push_back({k, p, q, v, note});
	};
	auto sf = linear_scale(f), sg = linear_scale(g);
	bool g_regular = sg && sg->slope_lo == sg->slope_hi;
	if (sf && g_regular && sf->level == sg->level) {
		// M_g^{-1} M_f(sigma) = (slope_f sigma + offset_f - offset_g) / slope_g + o(1)
		double s = sg->slope_lo;
		push(IndicatorKind::order, 0, 0, sf->slope_hi / s,
		     "composition is (slope_f sigma + const) / slope_g");
		push(IndicatorKind::lower_order, 0, 0, sf->slope_lo / s,
		     "composition is (slope_f sigma + const) / slope_g");
		if (sf->slope_lo == sf->slope_hi) {
			double t = std::exp((sf->offset - sg->offset) / s);
			for (auto k : {IndicatorKind::type, IndicatorKind::lower_type,
			               IndicatorKind::weak_type_tau, IndicatorKind::weak_type_tau_bar})
				push(k, 0, 0, t, "e^{composition} / e^{rho sigma} -> e^{(offset_f - offset_g)/slope_g}");
		}
		return out;
	}
	if (f.family == "tower_profile" && g.family == "tower_profile" &&
	    f.params.at("k") == g.params.at("k") && f.params.at("q") == g.params.at("q")) {
		int q0 = static_cast<int>(f.params.at("q"));
		double r = f.params.at("rho") / g.params.at("rho");
		std::string note = "log^[q] of the composition is (rho_f / rho_g) log^[q] sigma";
		push(IndicatorKind::order, q0, q0, r, note);
		push(IndicatorKind::lower_order, q0, q0, r, note);
		for (auto k : {IndicatorKind::type, IndicatorKind::lower_type,
		               IndicatorKind::weak_type_tau, IndicatorKind::weak_type_tau_bar})
			push(k, q0, q0, 1.0, "exp of the exact composition over its power is 1");
		return out;
	}
	if (f.source->key() == g.source->key()) {
		push(IndicatorKind::order, 0, 0, 1.0, "M^{-1} M is the identity");
		push(IndicatorKind::lower_order, 0, 0, 1.0, "M^{-1} M is the identity");
		for (auto k : {IndicatorKind::type, IndicatorKind::lower_type,
		               IndicatorKind::weak_type_tau, IndicatorKind::weak_type_tau_bar})
			push(k, 0, 0, 1.0, "e^sigma / e^sigma");
	}
	return out;
}

std::string describe_json(const CorpusEntry &e)
{
	nlohmann::ordered_json j;
	j["id"] = e.id;
	j["family"] = e.family;
	nlohmann::ordered_json params = nlohmann::ordered_json::object();
	for (const auto &[k, v] : e.params)
		params[k] = v;
	j["params"] = params;
	j["source"] = e.source->key();
	j["series_backed"] = e.source->series_backed();
	j["index_pair"] = {e.index_pair.p, e.index_pair.q};
	j["regular"] = e.regular;
	j["grid"] = e.grid.key();
	j["tolerance"] = e.tolerance;
	nlohmann::ordered_json rows = nlohmann::ordered_json::array();
	for (const auto &v : e.analytic) {
		nlohmann::ordered_json r;
		r["kind"] = to_string(v.kind, false);
		r["p"] = v.p;
		r["q"] = v.q;
		r["value"] = v.value;
		r["note"] = v.note;
		if (v.tolerance > 0)
			r["tolerance"] = v.tolerance;
		rows.push_back(r);
	}
	j["analytic"] = rows;
	return j.dump();
}

} // namespace dsg
