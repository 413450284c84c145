#include "dsg/indicators.hpp"

#include "dsg/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace dsg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

// numerator / denominator for a denominator known to be positive
double signed_quotient(const ExtReal &n, const ExtReal &d)
{
	if (n.level == 0 && n.mantissa <= 0.0) {
		auto dr = try_real(d);
		return dr ? n.mantissa / *dr : -0.0;
	}
	return quotient(n, d);
}

// log^[k] of a value whose logarithm is given; k may be 0 (exp of it)
ExtReal iter_log_of_exp(const ExtReal &log_value, int k)
{
	return iter_log(log_value, k - 1);
}

template <class Num, class Den>
RatioSequence build_ratios(const std::vector<double> &axis, Num numer, Den denom)
{
	RatioSequence seq;
	for (std::size_t i = 0; i < axis.size(); ++i) {
		try {
			auto [d, scale] = denom(i);
			if (!(from_real(0.0) < d))
				throw DomainError("non-positive denominator");
			ExtReal n = numer(i);
			seq.points.push_back({axis[i], signed_quotient(n, d), scale});
		} catch (const DomainError &e) {
			if (!seq.points.empty())
				throw DomainError("ratio leaves the iterated-log domain at sigma=" +
				                  num(axis[i]) + " after valid points");
			++seq.dropped;
		}
	}
	if (seq.points.empty())
		throw DomainError("no grid point lies inside the iterated-log domain");
	return seq;
}

// log^[q] sigma, or NaN when it is not a usable positive real
double scale_of(double sigma, int q)
{
	try {
		auto v = try_real(iter_log(from_real(sigma), q));
		return v && *v > 0.0 ? *v : kNaN;
	} catch (const DomainError &) {
		return kNaN;
	}
}

std::pair<ExtReal, double> denominator(RatioKind kind, int q,
                                       std::optional<double> exponent,
                                       double sigma)
{
	ExtReal s = from_real(sigma);
	if (kind == RatioKind::order)
		return {iter_log(s, q), scale_of(sigma, q)};
	ExtReal base = iter_log(s, q - 1);
	if (!(from_real(0.0) < base))
		throw DomainError("type denominator base is not positive");
	return {pow_scale(base, *exponent), scale_of(sigma, q)};
}

void require_exponent(RatioKind kind, std::optional<double> exponent)
{
	if (kind == RatioKind::type && !exponent)
		throw InvalidInput("type ratios need an exponent");
}

struct Fit {
	double a = 0.0;
	double b = 0.0;
};

// least squares y = a + b x
Fit linear_fit(const std::vector<double> &x, const std::vector<double> &y)
{
	double n = static_cast<double>(x.size());
	double mx = 0, my = 0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		mx += x[i];
		my += y[i];
	}
	mx /= n;
	my /= n;
	double sxx = 0, sxy = 0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		sxx += (x[i] - mx) * (x[i] - mx);
		sxy += (x[i] - mx) * (y[i] - my);
	}
	double b = sxx > 0 ? sxy / sxx : 0.0;
	return {my - b * mx, b};
}

} // namespace

RatioSequence ratio_sequence(const ProfileSource &src, RatioKind kind, int p,
                             int q, std::optional<double> exponent,
                             const std::vector<double> &sigmas)
{
	require_exponent(kind, exponent);
	int depth = kind == RatioKind::order ? p : p - 1;
	std::vector<ExtReal> logm;
	logm.reserve(sigmas.size());
	for (double s : sigmas)
		logm.push_back(src(s));
	return build_ratios(
	    sigmas, [&](std::size_t i) { return iter_log_of_exp(logm[i], depth); },
	    [&](std::size_t i) { return denominator(kind, q, exponent, sigmas[i]); });
}

RatioSequence relative_ratio_sequence(const std::vector<double> &composed,
                                      RatioKind kind, int p, int q,
                                      std::optional<double> exponent,
                                      const std::vector<double> &sigmas)
{
	require_exponent(kind, exponent);
	if (composed.size() != sigmas.size())
		throw InvalidInput("composed sequence and grid differ in length");
	int depth = kind == RatioKind::order ? p : p - 1;
	return build_ratios(
	    sigmas,
	    [&](std::size_t i) { return iter_log(from_real(composed[i]), depth); },
	    [&](std::size_t i) { return denominator(kind, q, exponent, sigmas[i]); });
}

TailEstimate tail_estimate(const RatioSequence &seq, TailMode mode,
                           const TailOptions &opts)
{
	const auto &pts = seq.points;
	const int n = static_cast<int>(pts.size());
	if (n < 8)
		throw InvalidInput("tail estimate needs at least 8 ratio points, got " +
		                   std::to_string(n));
	if (!(opts.window_fraction > 0.0 && opts.window_fraction <= 1.0))
		throw InvalidInput("window fraction must lie in (0, 1]");
	int w = static_cast<int>(std::ceil(opts.window_fraction * n));
	w = std::min(n, std::max(w, opts.min_window));
	const int start = n - w;
	const bool sup = mode == TailMode::limsup;

	TailEstimate est;
	est.window = w;
	std::vector<double> r(w), idx(w);
	for (int i = 0; i < w; ++i) {
		r[i] = pts[start + i].r;
		idx[i] = i;
	}
	auto extreme = [&](int from, int to) {
		double v = r[from];
		for (int i = from + 1; i < to; ++i)
			v = sup ? std::max(v, r[i]) : std::min(v, r[i]);
		return v;
	};

	if (!std::all_of(r.begin(), r.end(), [](double v) { return std::isfinite(v); })) {
		est.value = extreme(0, w);
		if (sup && std::any_of(r.begin(), r.end(), [](double v) { return v == kInf; }))
			est.value = kInf;
		est.trend = kNaN;
		return est;
	}

	est.trend = linear_fit(idx, r).b;
	double v = extreme(0, w);
	double tol = opts.converge_tol * std::max(1.0, std::abs(v));
	est.converged = std::abs(est.trend * (w - 1)) <= tol;
	est.stable = std::abs(extreme(w / 2, w) - extreme(0, w / 2)) <= tol;
	est.value = v;

	bool inc = true, dec = true;
	for (int i = 1; i < w; ++i) {
		double d = r[i] - r[i - 1];
		double noise = 1e-9 * std::max(1.0, std::abs(r[i]));
		inc = inc && d >= -noise;
		dec = dec && d <= noise;
	}
	if (inc && dec) {
		est.value = r.back();
		return est;
	}
	if (!opts.extrapolate || !est.converged || !(inc || dec))
		return est;

	std::vector<double> x(w);
	double smin = kInf, smax = 0.0;
	for (int i = 0; i < w; ++i) {
		double s = pts[start + i].scale;
		if (!(s > 0.0) || !std::isfinite(s))
			return est;
		smin = std::min(smin, s);
		smax = std::max(smax, s);
		x[i] = 1.0 / s;
	}
	if (!(smax > smin * (1.0 + 1e-9)))
		return est;
	Fit fit = linear_fit(x, r);
	double rmin = *std::min_element(r.begin(), r.end());
	double rmax = *std::max_element(r.begin(), r.end());
	double worst = 0.0;
	for (int i = 0; i < w; ++i)
		worst = std::max(worst, std::abs(fit.a + fit.b * x[i] - r[i]));
	if (worst > 0.01 * (rmax - rmin) + 1e-12 * std::max(1.0, std::abs(fit.a)))
		return est;
	est.value = inc ? std::max(fit.a, r.back()) : std::min(fit.a, r.back());
	est.extrapolated = true;
	return est;
}

std::string to_string(IndicatorKind k, bool relative)
{
	const char *base = "";
	switch (k) {
	case IndicatorKind::order: base = "order"; break;
	case IndicatorKind::lower_order: base = "lower_order"; break;
	case IndicatorKind::type: base = "type"; break;
	case IndicatorKind::lower_type: base = "lower_type"; break;
	case IndicatorKind::weak_type_tau: base = "weak_type_tau"; break;
	case IndicatorKind::weak_type_tau_bar: base = "weak_type_tau_bar"; break;
	}
	return relative ? std::string("relative_") + base : base;
}

namespace {

nlohmann::json json_number(double v)
{
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	return v;
}

TailMode mode_of(IndicatorKind k)
{
	switch (k) {
	case IndicatorKind::order:
	case IndicatorKind::type:
	case IndicatorKind::weak_type_tau_bar:
		return TailMode::limsup;
	default:
		return TailMode::liminf;
	}
}

// Combine the lower/upper surrogate sequences: the interval comes from the
// two tails, the value from the pointwise midpoint.
IndicatorEstimate combine(IndicatorKind kind, bool relative, int p, int q,
                          const RatioSequence &lo_seq, const RatioSequence &hi_seq,
                          const GridSpec &grid, const TailOptions &opts)
{
	TailMode mode = mode_of(kind);
	std::size_t k = std::min(lo_seq.points.size(), hi_seq.points.size());
	RatioSequence a, b, mid;
	a.points.assign(lo_seq.points.end() - k, lo_seq.points.end());
	b.points.assign(hi_seq.points.end() - k, hi_seq.points.end());
	mid.points = a.points;
	for (std::size_t i = 0; i < k; ++i) {
		double x = a.points[i].r, y = b.points[i].r;
		mid.points[i].r = x == y ? x : 0.5 * x + 0.5 * y;
	}
	TailEstimate ea = tail_estimate(a, mode, opts);
	TailEstimate eb = tail_estimate(b, mode, opts);
	TailEstimate em = tail_estimate(mid, mode, opts);

	IndicatorEstimate e;
	e.kind = kind;
	e.relative = relative;
	e.p = p;
	e.q = q;
	e.lo = std::min(ea.value, eb.value);
	e.hi = std::max(ea.value, eb.value);
	e.value = std::clamp(em.value, e.lo, e.hi);
	if (std::isnan(em.value))
		e.value = em.value;
	e.trend = em.trend;
	e.window_points = em.window;
	e.window = static_cast<double>(em.window) / static_cast<double>(k);
	e.converged = em.converged;
	e.stable = em.stable;
	e.dropped = std::max(lo_seq.dropped, hi_seq.dropped);
	e.grid = grid.key();
	if (em.extrapolated)
		e.note = "tail fit";
	return e;
}

void require_finite_positive(double v, const char *what)
{
	if (!(v > 0.0 && v < kInf))
		throw IndicatorUndefined(std::string(what) + " = " + num(v) +
		                         " is not inside (0, inf)");
}

bool has_two_sides(const SourcePtr &src) { return src->series_backed(); }

std::pair<IndicatorEstimate, IndicatorEstimate>
absolute_pair(const SourcePtr &src, RatioKind kind, IndicatorKind first,
              IndicatorKind second, int p, int q, std::optional<double> exponent,
              const GridSpec &grid, const TailOptions &opts)
{
	auto sigmas = grid.points();
	ProfileSource up{src, Surrogate::upper};
	sample_profile(up, grid); // monotonicity check on the grid
	RatioSequence hi = ratio_sequence(up, kind, p, q, exponent, sigmas);
	RatioSequence lo = has_two_sides(src)
	                       ? ratio_sequence({src, Surrogate::lower}, kind, p, q,
	                                        exponent, sigmas)
	                       : hi;
	return {combine(first, false, p, q, lo, hi, grid, opts),
	        combine(second, false, p, q, lo, hi, grid, opts)};
}

struct Compositions {
	const std::vector<double> *lo;
	const std::vector<double> *hi;
};

// lower: f-lower through g-upper; upper: f-upper through g-lower
Compositions compositions(const SourcePtr &f, const SourcePtr &g,
                          const GridSpec &grid)
{
	if (!has_two_sides(f) && !has_two_sides(g)) {
		auto &c = composed_cached({g, Surrogate::upper}, {f, Surrogate::upper}, grid);
		return {&c, &c};
	}
	auto &lo = composed_cached({g, Surrogate::upper}, {f, Surrogate::lower}, grid);
	auto &hi = composed_cached({g, Surrogate::lower}, {f, Surrogate::upper}, grid);
	return {&lo, &hi};
}

std::pair<IndicatorEstimate, IndicatorEstimate>
relative_pair(const SourcePtr &f, const SourcePtr &g, RatioKind kind,
              IndicatorKind first, IndicatorKind second, int p, int q,
              std::optional<double> exponent, const GridSpec &grid,
              const TailOptions &opts)
{
	auto sigmas = grid.points();
	auto c = compositions(f, g, grid);
	RatioSequence lo = relative_ratio_sequence(*c.lo, kind, p, q, exponent, sigmas);
	RatioSequence hi = c.lo == c.hi ? lo
	                                : relative_ratio_sequence(*c.hi, kind, p, q,
	                                                          exponent, sigmas);
	return {combine(first, true, p, q, lo, hi, grid, opts),
	        combine(second, true, p, q, lo, hi, grid, opts)};
}

// targets y uniform in log^[k] y between log M_f at the grid ends, with the
// smallest k >= 1 at which both ends are ordinary positive reals
std::vector<ExtReal> dual_targets(const SourcePtr &f, const GridSpec &grid)
{
	ProfileSource up{f, Surrogate::upper};
	ExtReal y0 = up(grid.sigma_min), y1 = up(grid.sigma_max);
	for (int k = 1; k < 8; ++k) {
		std::optional<double> u0, u1;
		try {
			u0 = try_real(iter_log(y0, k));
			u1 = try_real(iter_log(y1, k));
		} catch (const DomainError &) {
			throw InvalidInput("dual form needs log M_f > 1 at the grid start");
		}
		if (!u0 || !u1)
			continue;
		std::vector<ExtReal> ys(grid.count);
		for (int i = 0; i < grid.count; ++i) {
			double t = static_cast<double>(i) / (grid.count - 1);
			ys[i] = exp_iter(from_real(*u0 + t * (*u1 - *u0)), k);
		}
		return ys;
	}
	throw InvalidInput("dual form: log M_f too large to grid");
}

RatioSequence dual_sequence(const std::vector<double> &sg,
                            const std::vector<double> &sf, int p, int q)
{
	return build_ratios(
	    sf, [&](std::size_t i) { return iter_log(from_real(sg[i]), p); },
	    [&](std::size_t i) {
		    return std::pair{iter_log(from_real(sf[i]), q), scale_of(sf[i], q)};
	    });
}

std::pair<IndicatorEstimate, IndicatorEstimate>
dual_order_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                const GridSpec &grid, const TailOptions &opts)
{
	auto ys = dual_targets(f, grid);
	bool two = has_two_sides(f) || has_two_sides(g);
	auto sg_lo = invert_along({g, Surrogate::upper}, ys);
	auto sf_lo = invert_along({f, two ? Surrogate::lower : Surrogate::upper}, ys);
	RatioSequence lo = dual_sequence(sg_lo, sf_lo, p, q);
	RatioSequence hi = lo;
	if (two)
		hi = dual_sequence(invert_along({g, Surrogate::lower}, ys),
		                   invert_along({f, Surrogate::upper}, ys), p, q);
	auto a = combine(IndicatorKind::order, true, p, q, lo, hi, grid, opts);
	auto b = combine(IndicatorKind::lower_order, true, p, q, lo, hi, grid, opts);
	a.note = b.note = "dual form";
	return {a, b};
}

} // namespace

std::string to_json(const IndicatorEstimate &e)
{
	nlohmann::ordered_json j;
	j["kind"] = to_string(e.kind, e.relative);
	j["p"] = e.p;
	j["q"] = e.q;
	j["value"] = json_number(e.value);
	j["lo"] = json_number(e.lo);
	j["hi"] = json_number(e.hi);
	j["trend"] = json_number(e.trend);
	j["window"] = json_number(e.window);
	j["grid"] = e.grid;
	j["converged"] = e.converged;
	j["stable"] = e.stable;
	j["dropped"] = e.dropped;
	if (!e.note.empty())
		j["note"] = e.note;
	return j.dump();
}

std::pair<IndicatorEstimate, IndicatorEstimate>
order_pair(const SourcePtr &src, int p, int q, const GridSpec &grid,
           const TailOptions &opts)
{
	return absolute_pair(src, RatioKind::order, IndicatorKind::order,
	                     IndicatorKind::lower_order, p, q, std::nullopt, grid, opts);
}

std::pair<IndicatorEstimate, IndicatorEstimate>
type_pair(const SourcePtr &src, int p, int q, double rho, const GridSpec &grid,
          const TailOptions &opts)
{
	require_finite_positive(rho, "order");
	return absolute_pair(src, RatioKind::type, IndicatorKind::type,
	                     IndicatorKind::lower_type, p, q, rho, grid, opts);
}

std::pair<IndicatorEstimate, IndicatorEstimate>
weak_type_pair(const SourcePtr &src, int p, int q, double lambda,
               const GridSpec &grid, const TailOptions &opts)
{
	require_finite_positive(lambda, "lower order");
	return absolute_pair(src, RatioKind::type, IndicatorKind::weak_type_tau_bar,
	                     IndicatorKind::weak_type_tau, p, q, lambda, grid, opts);
}

std::pair<IndicatorEstimate, IndicatorEstimate>
relative_order_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                    const GridSpec &grid, RelativeForm form,
                    const TailOptions &opts)
{
	if (form == RelativeForm::dual)
		return dual_order_pair(f, g, p, q, grid, opts);
	return relative_pair(f, g, RatioKind::order, IndicatorKind::order,
	                     IndicatorKind::lower_order, p, q, std::nullopt, grid, opts);
}

std::pair<IndicatorEstimate, IndicatorEstimate>
relative_type_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                   double rho, const GridSpec &grid, const TailOptions &opts)
{
	require_finite_positive(rho, "relative order");
	return relative_pair(f, g, RatioKind::type, IndicatorKind::type,
	                     IndicatorKind::lower_type, p, q, rho, grid, opts);
}

std::pair<IndicatorEstimate, IndicatorEstimate>
relative_weak_type_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                        double lambda, const GridSpec &grid,
                        const TailOptions &opts)
{
	require_finite_positive(lambda, "relative lower order");
	return relative_pair(f, g, RatioKind::type, IndicatorKind::weak_type_tau_bar,
	                     IndicatorKind::weak_type_tau, p, q, lambda, grid, opts);
}

namespace {

std::string pair_text(IndexPair ip)
{
	return "(" + std::to_string(ip.p) + "," + std::to_string(ip.q) + ")";
}

std::string evidence_text(const std::vector<IndicatorEstimate> &ev)
{
	std::ostringstream os;
	for (const auto &e : ev)
		os << "\n  rho" << pair_text({e.p, e.q}) << " = " << num(e.value)
		   << (e.note.empty() ? "" : " [" + e.note + "]")
		   << (e.converged || e.stable ? "" : " (drifting)");
	return os.str();
}

IndicatorEstimate failed_estimate(IndicatorKind kind, bool relative, int p,
                                  int q, const GridSpec &grid, const Error &err)
{
	IndicatorEstimate e;
	e.kind = kind;
	e.relative = relative;
	e.p = p;
	e.q = q;
	e.value = e.lo = e.hi = e.trend = kNaN;
	e.grid = grid.key();
	e.note = err.what();
	return e;
}

} // namespace

bool admissible(const IndicatorEstimate &e, double eps)
{
	return std::isfinite(e.value) && e.value >= eps && e.value <= 1.0 / eps &&
	       (e.converged || e.stable);
}

DetectionResult detect_index_pair(const SourcePtr &src, const GridSpec &grid,
                                  const DetectOptions &opts)
{
	if (opts.p_max < 1 || opts.p_max > 6 || opts.q_max < 0 || opts.q_max > 6)
		throw InvalidInput("detection needs 1 <= p_max <= 6 and 0 <= q_max <= 6");
	std::map<std::pair<int, int>, IndicatorEstimate> seen;
	DetectionResult res;
	auto rho = [&](int p, int q) -> const IndicatorEstimate & {
		auto it = seen.find({p, q});
		if (it != seen.end())
			return it->second;
		IndicatorEstimate e;
		try {
			e = order_pair(src, p, q, grid, opts.tail).first;
		} catch (const DomainError &err) {
			e = failed_estimate(IndicatorKind::order, false, p, q, grid, err);
		} catch (const OverflowError &err) {
			e = failed_estimate(IndicatorKind::order, false, p, q, grid, err);
		}
		res.evidence.push_back(e);
		return seen.emplace(std::pair{p, q}, e).first->second;
	};

	std::vector<IndexPair> scan{{1, 1}};
	for (int p = 1; p <= opts.p_max; ++p)
		for (int q = std::min(p - 1, opts.q_max); q >= 0; --q)
			scan.push_back({p, q});
	for (IndexPair ip : scan) {
		const IndicatorEstimate &e = rho(ip.p, ip.q);
		if (!admissible(e, opts.eps))
			continue;
		if (ip != IndexPair{1, 1} && ip.q >= 1 &&
		    admissible(rho(ip.p - 1, ip.q - 1), opts.eps))
			continue;
		res.pair = ip;
		res.order = e;
		return res;
	}
	throw DetectionFailed("no admissible index pair for " + src->key() +
	                      evidence_text(res.evidence));
}

DetectionResult detect_relative_index_pair(const SourcePtr &f,
                                           const SourcePtr &g, int m,
                                           const GridSpec &grid,
                                           const DetectOptions &opts)
{
	if (opts.p_max < 0 || opts.p_max > 6 || opts.q_max < 0 || opts.q_max > 6)
		throw InvalidInput("detection needs 0 <= p_max, q_max <= 6");
	std::map<std::pair<int, int>, IndicatorEstimate> seen;
	DetectionResult res;
	auto rho = [&](int p, int q) -> const IndicatorEstimate & {
		auto it = seen.find({p, q});
		if (it != seen.end())
			return it->second;
		IndicatorEstimate e;
		try {
			e = relative_order_pair(f, g, p, q, grid, RelativeForm::direct, opts.tail)
			        .first;
		} catch (const DomainError &err) {
			e = failed_estimate(IndicatorKind::order, true, p, q, grid, err);
		} catch (const OverflowError &err) {
			e = failed_estimate(IndicatorKind::order, true, p, q, grid, err);
		}
		res.evidence.push_back(e);
		return seen.emplace(std::pair{p, q}, e).first->second;
	};

	for (int p = 0; p <= opts.p_max; ++p)
		for (int q = opts.q_max; q >= 0; --q) {
			const IndicatorEstimate &e = rho(p, q);
			if (!admissible(e, opts.eps))
				continue;
			if (p == q && p == m && !(e.value > 1.0 + opts.margin))
				continue;
			if (p >= 1 && q >= 1 && admissible(rho(p - 1, q - 1), opts.eps))
				continue;
			res.pair = {p, q};
			res.order = e;
			return res;
		}
	throw DetectionFailed("no admissible relative index pair for " + f->key() +
	                      " against " + g->key() + evidence_text(res.evidence));
}

RelativeIndicators relative_indicators(const SourcePtr &f, const SourcePtr &g,
                                       int p, int q, const GridSpec &grid,
                                       const RelativeOptions &opts)
{
	RelativeIndicators out;
	std::tie(out.order, out.lower_order) =
	    relative_order_pair(f, g, p, q, grid, opts.form, opts.tail);
	auto usable = [](double v) { return v > 0.0 && v < kInf; };
	if (usable(out.order.value)) {
		auto [t, lt] = relative_type_pair(f, g, p, q, out.order.value, grid, opts.tail);
		out.type = t;
		out.lower_type = lt;
	}
	if (usable(out.lower_order.value)) {
		auto [tb, t] =
		    relative_weak_type_pair(f, g, p, q, out.lower_order.value, grid, opts.tail);
		out.weak_tau_bar = tb;
		out.weak_tau = t;
	}
	if (opts.check_pairs) {
		try {
			IndexPair pf = detect_index_pair(f, grid).pair;
			IndexPair pg = detect_index_pair(g, grid).pair;
			if (pf.p != pg.p || pf.q != q || pg.q != p)
				out.pair_note = "index pairs f" + pair_text(pf) + ", g" +
				                pair_text(pg) + " do not match (m," +
				                std::to_string(q) + ") and (m," +
				                std::to_string(p) + ")";
		} catch (const DetectionFailed &) {
			out.pair_note = "index pair of f or g could not be determined";
		}
	}
	return out;
}

} // namespace dsg
