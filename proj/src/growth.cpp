#include "dsg/growth.hpp"

#include "dsg/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace dsg {

namespace {

std::string num(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

class SeriesSource final : public GrowthSource {
public:
	SeriesSource(SeriesSpec spec, SumOptions opts)
	    : spec_(std::move(spec)), opts_(opts)
	{
	}

	ExtReal log_modulus(double sigma, Surrogate s) const override
	{
		if (s == Surrogate::lower)
			return max_term_log(spec_, sigma, 64, opts_).value;
		return log_sum_upper(spec_, sigma, opts_.tail_tol, opts_);
	}
	std::string key() const override { return spec_.key; }
	bool series_backed() const override { return true; }
	const SeriesSpec &spec() const { return spec_; }

private:
	SeriesSpec spec_;
	SumOptions opts_;
};

class SyntheticSource final : public GrowthSource {
public:
	SyntheticSource(std::string key, std::function<ExtReal(double)> rule,
	                double floor)
	    : key_(std::move(key)), rule_(std::move(rule)), floor_(floor)
	{
	}

	ExtReal log_modulus(double sigma, Surrogate) const override
	{
		return rule_(sigma);
	}
	std::string key() const override { return key_; }
	bool series_backed() const override { return false; }
	double sigma_floor() const override { return floor_; }

private:
	std::string key_;
	std::function<ExtReal(double)> rule_;
	double floor_;
};

} // namespace

std::string to_string(Surrogate s)
{
	return s == Surrogate::lower ? "lower" : "upper";
}

SourcePtr series_source(SeriesSpec spec, SumOptions opts)
{
	return std::make_shared<SeriesSource>(std::move(spec), opts);
}

SourcePtr synthetic_source(std::string key, std::function<ExtReal(double)> rule,
                           double sigma_floor)
{
	return std::make_shared<SyntheticSource>(std::move(key), std::move(rule),
	                                         sigma_floor);
}

const SeriesSpec *series_of(const GrowthSource &src)
{
	auto s = dynamic_cast<const SeriesSource *>(&src);
	return s ? &s->spec() : nullptr;
}

std::string ProfileSource::key() const
{
	return source->key() + "#" + to_string(surrogate);
}

std::vector<double> GridSpec::points() const
{
	if (count < 2)
		throw InvalidInput("grid needs at least two points");
	if (!(sigma_min < sigma_max))
		throw InvalidInput("grid needs sigma_min < sigma_max");
	if (spacing == Spacing::log && !(sigma_min > 0.0))
		throw InvalidInput("log grid needs sigma_min > 0");
	std::vector<double> out(count);
	for (int i = 0; i < count; ++i) {
		double t = static_cast<double>(i) / (count - 1);
		if (spacing == Spacing::linear)
			out[i] = sigma_min + t * (sigma_max - sigma_min);
		else
			out[i] = std::exp(std::log(sigma_min) +
			                  t * (std::log(sigma_max) - std::log(sigma_min)));
	}
	out.front() = sigma_min;
	out.back() = sigma_max;
	return out;
}

std::string GridSpec::key() const
{
	return num(sigma_min) + ":" + num(sigma_max) + ":" + std::to_string(count) +
	       (spacing == Spacing::log ? ":log" : ":linear");
}

GridSpec parse_grid(const std::string &text)
{
	std::vector<std::string> parts;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ':'))
		parts.push_back(item);
	if (parts.size() < 3 || parts.size() > 4)
		throw InvalidInput("grid must look like min:max:count[:log|:linear]");
	GridSpec g;
	try {
		std::size_t used = 0;
		g.sigma_min = std::stod(parts[0], &used);
		if (used != parts[0].size())
			throw std::invalid_argument("min");
		g.sigma_max = std::stod(parts[1], &used);
		if (used != parts[1].size())
			throw std::invalid_argument("max");
		g.count = std::stoi(parts[2], &used);
		if (used != parts[2].size())
			throw std::invalid_argument("count");
	} catch (const std::logic_error &) {
		throw InvalidInput("grid '" + text + "' has a malformed number");
	}
	if (parts.size() == 4) {
		if (parts[3] == "log")
			g.spacing = GridSpec::Spacing::log;
		else if (parts[3] != "linear")
			throw InvalidInput("grid spacing must be log or linear");
	}
	g.points();
	return g;
}

GrowthProfile sample_profile(const ProfileSource &src, const GridSpec &grid)
{
	GrowthProfile p;
	p.source_key = src.source->key();
	p.surrogate = src.surrogate;
	p.series_backed = src.source->series_backed();
	p.grid = grid;
	p.sigma = grid.points();
	p.log_m.reserve(p.sigma.size());
	for (std::size_t i = 0; i < p.sigma.size(); ++i) {
		p.log_m.push_back(src(p.sigma[i]));
		if (i > 0 && !(p.log_m[i - 1] < p.log_m[i]))
			throw MonotonicityError("log M not increasing between sigma=" +
			                        num(p.sigma[i - 1]) + " and sigma=" +
			                        num(p.sigma[i]));
	}
	return p;
}

std::string hash_hex(const std::string &text)
{
	std::uint64_t h = 1469598103934665603ull;
	for (unsigned char c : text) {
		h ^= c;
		h *= 1099511628211ull;
	}
	char buf[24];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

std::filesystem::path profile_cache_path(const std::filesystem::path &dir,
                                         const ProfileSource &src,
                                         const GridSpec &grid)
{
	return dir / ("profile-" + hash_hex(src.key() + "|" + grid.key()) + ".csv");
}

void write_profile_csv(std::ostream &os, const GrowthProfile &p)
{
	os << "sigma,level,mantissa\n";
	for (std::size_t i = 0; i < p.sigma.size(); ++i)
		os << num(p.sigma[i]) << "," << p.log_m[i].level << ","
		   << num(p.log_m[i].mantissa) << "\n";
}

std::vector<std::pair<double, ExtReal>> read_profile_csv(std::istream &is)
{
	std::vector<std::pair<double, ExtReal>> rows;
	std::string line;
	if (!std::getline(is, line) || line != "sigma,level,mantissa")
		throw SchemaError("profile cache: missing header");
	int lineno = 1;
	while (std::getline(is, line)) {
		++lineno;
		if (line.empty())
			continue;
		double s = 0, m = 0;
		int level = 0;
		char tail = 0;
		if (std::sscanf(line.c_str(), "%lf,%d,%lf%c", &s, &level, &m, &tail) != 3)
			throw SchemaError("profile cache: malformed row at line " +
			                  std::to_string(lineno));
		rows.push_back({s, ExtReal{level, m}});
	}
	return rows;
}

GrowthProfile sample_profile_cached(const ProfileSource &src,
                                    const GridSpec &grid,
                                    const std::filesystem::path &cache_dir)
{
	auto path = profile_cache_path(cache_dir, src, grid);
	std::ifstream in(path);
	if (in) {
		try {
			auto rows = read_profile_csv(in);
			auto sig = grid.points();
			if (rows.size() == sig.size()) {
				GrowthProfile p;
				p.source_key = src.source->key();
				p.surrogate = src.surrogate;
				p.series_backed = src.source->series_backed();
				p.grid = grid;
				for (auto &[s, v] : rows) {
					p.sigma.push_back(s);
					p.log_m.push_back(v);
				}
				if (p.sigma == sig)
					return p;
			}
		} catch (const SchemaError &) {
			// stale or damaged entry: fall through and rebuild it
		}
	}
	GrowthProfile p = sample_profile(src, grid);
	std::filesystem::create_directories(cache_dir);
	auto tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp);
		write_profile_csv(out, p);
	}
	std::filesystem::rename(tmp, path);
	return p;
}

double invert_modulus(const ProfileSource &src, const ExtReal &y,
                      std::pair<double, double> hint, const InvertOptions &opts)
{
	const double floor = src.source->sigma_floor();
	auto [lo, hi] = hint;
	if (lo > hi)
		std::swap(lo, hi);
	lo = std::max(lo, floor);
	if (!(hi > lo))
		hi = lo + 1.0;

	auto value = [&](double s) {
		try {
			return src(s);
		} catch (const SeriesError &e) {
			throw RangeError(std::string("inversion left the evaluable range: ") +
			                 e.what());
		}
	};

	double width = hi - lo;
	int steps = 0;
	ExtReal vlo = value(lo);
	while (y < vlo) {
		if (lo <= floor)
			throw RangeError("target " + to_string(y) +
			                 " lies below log M at the floor sigma=" + num(floor));
		hi = lo;
		lo = std::max(floor, lo - width);
		width *= 2.0;
		if (++steps > opts.max_doublings)
			throw RangeError("bracket expansion cap exceeded");
		vlo = value(lo);
	}
	if (vlo == y)
		return lo;
	ExtReal vhi = value(hi);
	while (vhi < y) {
		lo = hi;
		hi += width;
		width *= 2.0;
		if (++steps > opts.max_doublings || !std::isfinite(hi))
			throw RangeError("bracket expansion cap exceeded");
		vhi = value(hi);
	}
	// Bracketing root finder on the residual log^[k] log M - log^[k] y, with
	// k the level of y so the residual lives on the mantissa scale. Outside
	// the iterated-log domain the residual is pinned far below / above.
	const int k = y.level;
	const double u = iter_log(y, k).mantissa;
	auto residual = [&](double s) {
		try {
			auto v = try_real(iter_log(value(s), k));
			return v ? *v - u : 1e300;
		} catch (const DomainError &) {
			return -1e300;
		}
	};
	auto close_enough = [&](double a, double b) {
		return std::abs(b - a) <=
		       opts.rel_tol * std::max(1.0, std::abs(a + (b - a) / 2.0));
	};
	double flo = residual(lo), fhi = residual(hi);
	if (flo < 0.0 && fhi > 0.0) {
		std::uintmax_t iters = 200;
		auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, flo, fhi,
		                                                close_enough, iters);
		lo = a;
		hi = b;
	}
	for (;;) {
		double mid = lo + (hi - lo) / 2.0;
		if (close_enough(lo, hi) || mid <= lo || mid >= hi)
			return mid;
		if (value(mid) < y)
			lo = mid;
		else
			hi = mid;
	}
}

double invert_modulus(const ProfileSource &src, const ExtReal &y)
{
	double f = src.source->sigma_floor();
	return invert_modulus(src, y, {f, f + 1.0});
}

double compose_relative(const ProfileSource &g, const ProfileSource &f,
                        double sigma)
{
	return invert_modulus(g, f(sigma));
}

std::vector<double> invert_along(const ProfileSource &src,
                                 const std::vector<ExtReal> &ys)
{
	std::vector<double> out;
	out.reserve(ys.size());
	for (const ExtReal &y : ys) {
		if (out.empty()) {
			out.push_back(invert_modulus(src, y));
			continue;
		}
		double prev = out.back();
		double step = out.size() >= 2 ? std::abs(prev - out[out.size() - 2])
		                              : std::max(1.0, std::abs(prev)) * 1e-3;
		double width = std::max(step, 1e-9 * std::max(1.0, std::abs(prev)));
		out.push_back(invert_modulus(src, y, {prev, prev + 2.0 * width}));
	}
	return out;
}

std::vector<double> compose_along(const ProfileSource &g,
                                  const ProfileSource &f,
                                  const std::vector<double> &sigmas)
{
	std::vector<ExtReal> ys;
	ys.reserve(sigmas.size());
	for (double s : sigmas)
		ys.push_back(f(s));
	return invert_along(g, ys);
}

namespace {
std::mutex cache_mutex;
std::map<std::string, std::vector<double>> cache;
} // namespace

const std::vector<double> &composed_cached(const ProfileSource &g,
                                           const ProfileSource &f,
                                           const GridSpec &grid)
{
	std::string k = g.key() + "|" + f.key() + "|" + grid.key();
	{
		std::lock_guard lock(cache_mutex);
		auto it = cache.find(k);
		if (it != cache.end())
			return it->second;
	}
	auto seq = compose_along(g, f, grid.points());
	std::lock_guard lock(cache_mutex);
	return cache.emplace(k, std::move(seq)).first->second;
}

void clear_composition_cache()
{
	std::lock_guard lock(cache_mutex);
	cache.clear();
}

} // namespace dsg
