#pragma once

#include "dsg/growth.hpp"
#include "dsg/indicators.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsg {

struct AnalyticValue {
	IndicatorKind kind = IndicatorKind::order;
	int p = 0;
	int q = 0;
	double value = 0.0;
	std::string note;
	double tolerance = 0.0; // 0: the entry's tolerance applies
};

// A family member with known indicators.
//   expexp:a=..,c=..              coefficients c^n/n!, exponents a n
//   tower_profile:k=..,rho=..,q=..  log^[k] M = rho log^[q] sigma
//   osc_profile:rho=..,lambda=..,p=..,q=0
//                                 log^[p] M = (m0 + m1 sin log sigma) sigma
//   table                          user coefficient table (no analytic values)
struct CorpusEntry {
	std::string id;
	std::string family;
	std::map<std::string, double> params;
	SourcePtr source;
	IndexPair index_pair;
	bool regular = true;
	std::vector<AnalyticValue> analytic;
	GridSpec grid;          // default evaluation grid
	double tolerance = 1e-3; // declared estimate agreement
};

std::vector<std::string> corpus_ids();

// "family:key=value,..." as listed by corpus_ids(); InvalidInput otherwise
CorpusEntry instantiate(const std::string &id);
CorpusEntry instantiate(const std::string &family,
                        const std::map<std::string, double> &params);
CorpusEntry table_entry(const SeriesSpec &spec);

std::optional<double> analytic_value(const CorpusEntry &e, IndicatorKind kind,
                                     int p, int q);

// closed-form relative indicators of f with respect to g where M_g^{-1}
// linearizes M_f; nullopt when the pair has no closed form
std::optional<AnalyticValue> relative_analytic(const CorpusEntry &f,
                                               const CorpusEntry &g,
                                               IndicatorKind kind, int p, int q);
std::vector<AnalyticValue> relative_analytic_table(const CorpusEntry &f,
                                                   const CorpusEntry &g);

std::string describe_json(const CorpusEntry &e);

} // namespace dsg
