#pragma once

#include "dsg/growth.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dsg {

struct IndexPair {
	int p = 0;
	int q = 0;
	friend bool operator==(const IndexPair &, const IndexPair &) = default;
};

// order:  log^[p] X / log^[q] sigma
// type:   log^[p-1] X / (log^[q-1] sigma)^exponent
// where X is M (absolute) or M_g^{-1} M_f (relative).
enum class RatioKind { order, type };

struct RatioPoint {
	double sigma = 0.0;
	double r = 0.0;
	// log^[q] sigma, the abscissa of the 1/scale tail fit; NaN if unusable
	double scale = 0.0;
};

struct RatioSequence {
	std::vector<RatioPoint> points;
	int dropped = 0; // leading grid points outside the iterated-log domain
};

RatioSequence ratio_sequence(const ProfileSource &src, RatioKind kind, int p,
                             int q, std::optional<double> exponent,
                             const std::vector<double> &sigmas);
// composed[i] = M_g^{-1} M_f(sigmas[i])
RatioSequence relative_ratio_sequence(const std::vector<double> &composed,
                                      RatioKind kind, int p, int q,
                                      std::optional<double> exponent,
                                      const std::vector<double> &sigmas);

enum class TailMode { limsup, liminf };

struct TailOptions {
	double window_fraction = 0.4;
	int min_window = 16;
	// converged when |trend * window| <= tol * max(1, |value|)
	double converge_tol = 0.05;
	// allow the r = A + B/scale fit on monotone, converged tails
	bool extrapolate = true;
};

struct TailEstimate {
	double value = 0.0;
	double trend = 0.0;
	int window = 0;
	bool converged = false;
	// the extreme over each half of the window agrees to converge_tol
	bool stable = false;
	bool extrapolated = false;
};

TailEstimate tail_estimate(const RatioSequence &seq, TailMode mode,
                           const TailOptions &opts = {});

enum class IndicatorKind {
	order,
	lower_order,
	type,
	lower_type,
	weak_type_tau,
	weak_type_tau_bar,
};

std::string to_string(IndicatorKind k, bool relative);

struct IndicatorEstimate {
	IndicatorKind kind = IndicatorKind::order;
	bool relative = false;
	int p = 0;
	int q = 0;
	double value = 0.0;
	double lo = 0.0;
	double hi = 0.0;
	double trend = 0.0;
	double window = 0.0; // fraction of the usable grid in the tail window
	int window_points = 0;
	bool converged = false;
	bool stable = false;
	int dropped = 0;
	std::string grid;
	std::string note;
};

std::string to_json(const IndicatorEstimate &e);

// (rho, lambda)
std::pair<IndicatorEstimate, IndicatorEstimate>
order_pair(const SourcePtr &src, int p, int q, const GridSpec &grid,
           const TailOptions &opts = {});
// (Delta, lower Delta) for 0 < rho < inf
std::pair<IndicatorEstimate, IndicatorEstimate>
type_pair(const SourcePtr &src, int p, int q, double rho, const GridSpec &grid,
          const TailOptions &opts = {});
// (tau bar, tau) for 0 < lambda < inf
std::pair<IndicatorEstimate, IndicatorEstimate>
weak_type_pair(const SourcePtr &src, int p, int q, double lambda,
               const GridSpec &grid, const TailOptions &opts = {});

enum class RelativeForm { direct, dual };

struct RelativeOptions {
	RelativeForm form = RelativeForm::direct;
	TailOptions tail;
	// also detect both absolute index pairs and flag a mismatch with (p, q)
	bool check_pairs = false;
};

// Types and weak types are present only when the matching order estimate
// is finite and nonzero.
struct RelativeIndicators {
	IndicatorEstimate order, lower_order;
	std::optional<IndicatorEstimate> type, lower_type, weak_tau, weak_tau_bar;
	std::string pair_note;
};

RelativeIndicators relative_indicators(const SourcePtr &f, const SourcePtr &g,
                                       int p, int q, const GridSpec &grid,
                                       const RelativeOptions &opts = {});

std::pair<IndicatorEstimate, IndicatorEstimate>
relative_order_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                    const GridSpec &grid, RelativeForm form = RelativeForm::direct,
                    const TailOptions &opts = {});
std::pair<IndicatorEstimate, IndicatorEstimate>
relative_type_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                   double rho, const GridSpec &grid, const TailOptions &opts = {});
std::pair<IndicatorEstimate, IndicatorEstimate>
relative_weak_type_pair(const SourcePtr &f, const SourcePtr &g, int p, int q,
                        double lambda, const GridSpec &grid,
                        const TailOptions &opts = {});

struct DetectOptions {
	int p_max = 4;
	int q_max = 3;
	double eps = 1e-3;
	double margin = 0.1;
	TailOptions tail;
};

struct DetectionResult {
	IndexPair pair;
	IndicatorEstimate order;
	std::vector<IndicatorEstimate> evidence;
};

// Throws DetectionFailed (message carries the evidence) when nothing fits.
DetectionResult detect_index_pair(const SourcePtr &src, const GridSpec &grid,
                                  const DetectOptions &opts = {});
// m: the shared first index of the absolute pairs; the p = q = m case
// needs rho above 1 + margin.
DetectionResult detect_relative_index_pair(const SourcePtr &f,
                                           const SourcePtr &g, int m,
                                           const GridSpec &grid,
                                           const DetectOptions &opts = {});

// finite, inside [eps, 1/eps], and not drifting
bool admissible(const IndicatorEstimate &e, double eps);

} // namespace dsg
