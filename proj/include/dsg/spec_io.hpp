#pragma once

#include "dsg/corpus.hpp"
#include "dsg/theorems.hpp"

#include <string>
#include <vector>

namespace dsg {

// Spec documents (one JSON object, unknown fields rejected):
//   {"family": "expexp", "a": 1, "c": 3}
//   {"family": "tower_profile", "k": 2, "rho": 1, "q": 0}
//   {"family": "osc_profile", "rho": 2, "lambda": 1, "p": 2, "q": 0}
//   {"family": "table", "name": "t", "lambda": [...], "log_norm": [...]}
// Any of them may carry "sigma": "min:max:count[:log]" to replace the
// default evaluation grid. Errors are SchemaError naming the line or field.
CorpusEntry parse_spec(const std::string &json_text,
                       const std::string &origin = "<spec>");
CorpusEntry load_spec(const std::string &path);

// A corpus id ("expexp:a=2,c=1"), inline JSON, or a path to a spec file.
CorpusEntry resolve_spec(const std::string &ref);

// Batch documents:
//   {"tolerance": 2e-2, "eps": 1e-3,
//    "instances": [{"theorems": ["T1", "C5"] | "all", "f": ref, "g": ref,
//                   "h": ref, "m": 0, "p": 0, "q": 0,
//                   "sigma": "5:30:64", "tolerance": 2e-2}]}
// "theorem": "T1" is accepted in place of "theorems". Refs are spec refs or
// inline spec objects; relative paths resolve against base_dir.
std::vector<TheoremInstance> parse_batch(const std::string &json_text,
                                         const std::string &base_dir = ".",
                                         const std::string &origin = "<batch>");
std::vector<TheoremInstance> load_batch(const std::string &path);

} // namespace dsg
