#pragma once

#include "dsg/levelindex.hpp"
#include "dsg/series.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dsg {

// Which side of the maximum-term / coefficient-sum sandwich to evaluate.
enum class Surrogate { lower, upper };

std::string to_string(Surrogate s);

// Anything that yields sigma -> log M(sigma).
class GrowthSource {
public:
	virtual ~GrowthSource() = default;
	virtual ExtReal log_modulus(double sigma, Surrogate s) const = 0;
	virtual std::string key() const = 0;
	virtual bool series_backed() const = 0;
	// inversion never searches below this abscissa
	virtual double sigma_floor() const { return 0.0; }
};

using SourcePtr = std::shared_ptr<const GrowthSource>;

SourcePtr series_source(SeriesSpec spec, SumOptions opts = {});
// rule must be strictly increasing; it is evaluated only at sigma >= floor
SourcePtr synthetic_source(std::string key,
                           std::function<ExtReal(double)> rule,
                           double sigma_floor = 0.0);
const SeriesSpec *series_of(const GrowthSource &src);

// A source together with the surrogate to read from it.
struct ProfileSource {
	SourcePtr source;
	Surrogate surrogate = Surrogate::upper;

	ExtReal operator()(double sigma) const
	{
		return source->log_modulus(sigma, surrogate);
	}
	std::string key() const;
};

struct GridSpec {
	enum class Spacing { linear, log };
	double sigma_min = 0.0;
	double sigma_max = 1.0;
	int count = 2;
	Spacing spacing = Spacing::linear;

	std::vector<double> points() const;
	std::string key() const;
};

// "a:b:n" or "a:b:n:log"
GridSpec parse_grid(const std::string &text);

struct GrowthProfile {
	std::string source_key;
	Surrogate surrogate = Surrogate::upper;
	bool series_backed = false;
	GridSpec grid;
	std::vector<double> sigma;
	std::vector<ExtReal> log_m;
};

GrowthProfile sample_profile(const ProfileSource &src, const GridSpec &grid);

// Profile cache: one CSV per (source, surrogate, grid), header line
// "sigma,level,mantissa" followed by one row per grid point, numbers
// printed with 17 significant digits.
std::filesystem::path profile_cache_path(const std::filesystem::path &dir,
                                         const ProfileSource &src,
                                         const GridSpec &grid);
GrowthProfile sample_profile_cached(const ProfileSource &src,
                                    const GridSpec &grid,
                                    const std::filesystem::path &cache_dir);
void write_profile_csv(std::ostream &os, const GrowthProfile &p);
std::vector<std::pair<double, ExtReal>> read_profile_csv(std::istream &is);

struct InvertOptions {
	double rel_tol = 1e-12;
	int max_doublings = 120;
};

// sigma with log M(sigma) = y, by bisection on the monotone map
double invert_modulus(const ProfileSource &src, const ExtReal &y,
                      std::pair<double, double> hint,
                      const InvertOptions &opts = {});
double invert_modulus(const ProfileSource &src, const ExtReal &y);

// one root per target, each warm-started from the previous root
std::vector<double> invert_along(const ProfileSource &src,
                                 const std::vector<ExtReal> &ys);

// M_g^{-1}(M_f(sigma)), computed in the log domain
double compose_relative(const ProfileSource &g, const ProfileSource &f,
                        double sigma);
// the same along a grid, via invert_along
std::vector<double> compose_along(const ProfileSource &g,
                                  const ProfileSource &f,
                                  const std::vector<double> &sigmas);

// Memoized compose_along keyed by (g, f, grid).
const std::vector<double> &composed_cached(const ProfileSource &g,
                                           const ProfileSource &f,
                                           const GridSpec &grid);
void clear_composition_cache();

std::string hash_hex(const std::string &text);

} // namespace dsg
