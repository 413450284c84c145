#include "dsg/spec_io.hpp"

#include "dsg/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dsg {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string &path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw SchemaError("cannot read '" + path + "'");
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

json parse_text(const std::string &text, const std::string &origin)
{
	try {
		return json::parse(text);
	} catch (const json::parse_error &e) {
		// e.what() carries "at line L, column C"
		throw SchemaError(origin + ": " + e.what());
	}
}

[[noreturn]] void fail(const std::string &origin, const std::string &field,
                       const std::string &what)
{
	throw SchemaError(origin + ": field '" + field + "': " + what);
}

double number(const json &j, const std::string &origin, const std::string &field)
{
	if (!j.is_number())
		fail(origin, field, "expected a number, got " + j.dump());
	return j.get<double>();
}

int index(const json &j, const std::string &origin, const std::string &field)
{
	if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > 64)
		fail(origin, field, "expected a non-negative integer, got " + j.dump());
	return j.get<int>();
}

std::vector<double> numbers(const json &j, const std::string &origin,
                            const std::string &field)
{
	if (!j.is_array() || j.empty())
		fail(origin, field, "expected a non-empty array of numbers");
	std::vector<double> out;
	for (std::size_t i = 0; i < j.size(); ++i)
		out.push_back(number(j[i], origin, field + "[" + std::to_string(i) + "]"));
	return out;
}

GridSpec grid_field(const json &j, const std::string &origin, const std::string &field)
{
	if (!j.is_string())
		fail(origin, field, "expected \"min:max:count[:log]\"");
	try {
		return parse_grid(j.get<std::string>());
	} catch (const InvalidInput &e) {
		fail(origin, field, e.what());
	}
}

CorpusEntry spec_from_json(const json &j, const std::string &origin)
{
	if (!j.is_object())
		throw SchemaError(origin + ": a spec must be a JSON object");
	if (!j.contains("family") || !j["family"].is_string())
		fail(origin, "family", "missing or not a string");
	std::string family = j["family"];

	static const std::map<std::string, std::vector<std::string>> fields = {
	    {"expexp", {"a", "c"}},
	    {"tower_profile", {"k", "rho", "q"}},
	    {"osc_profile", {"rho", "lambda", "p", "q"}},
	    {"table", {"name", "lambda", "log_norm"}},
	};
	auto known = fields.find(family);
	if (known == fields.end())
		fail(origin, "family",
		     "unknown family '" + family +
		         "' (expected expexp, tower_profile, osc_profile or table)");
	for (const auto &[key, value] : j.items()) {
		if (key == "family" || key == "sigma")
			continue;
		const auto &allowed = known->second;
		if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
			fail(origin, key, "unknown field for family " + family);
	}

	CorpusEntry e;
	if (family == "table") {
		for (const char *req : {"lambda", "log_norm"})
			if (!j.contains(req))
				fail(origin, req, "missing");
		std::string name = "table";
		if (j.contains("name")) {
			if (!j["name"].is_string())
				fail(origin, "name", "expected a string");
			name = j["name"];
		}
		try {
			e = table_entry(table_spec(name, numbers(j["lambda"], origin, "lambda"),
			                           numbers(j["log_norm"], origin, "log_norm")));
		} catch (const InvalidInput &err) {
			throw SchemaError(origin + ": " + err.what());
		}
	} else {
		std::map<std::string, double> params;
		for (const auto &key : known->second) {
			if (!j.contains(key))
				fail(origin, key, "missing");
			params[key] = number(j[key], origin, key);
		}
		try {
			e = instantiate(family, params);
		} catch (const InvalidInput &err) {
			throw SchemaError(origin + ": " + err.what());
		}
	}
	if (j.contains("sigma"))
		e.grid = grid_field(j["sigma"], origin, "sigma");
	return e;
}

CorpusEntry ref_from_json(const json &j, const std::string &base_dir,
                          const std::string &origin)
{
	if (j.is_object())
		return spec_from_json(j, origin);
	if (!j.is_string())
		throw SchemaError(origin + ": expected a spec reference or spec object");
	std::string ref = j;
	fs::path p(ref);
	if (p.is_relative())
		p = fs::path(base_dir) / p;
	if (ref.find(':') == std::string::npos || fs::exists(p))
		return load_spec(p.string());
	try {
		return instantiate(ref);
	} catch (const InvalidInput &err) {
		throw SchemaError(origin + ": " + err.what());
	}
}

} // namespace

CorpusEntry parse_spec(const std::string &json_text, const std::string &origin)
{
	return spec_from_json(parse_text(json_text, origin), origin);
}

CorpusEntry load_spec(const std::string &path)
{
	return parse_spec(read_file(path), path);
}

CorpusEntry resolve_spec(const std::string &ref)
{
	auto first = ref.find_first_not_of(" \t\n");
	if (first != std::string::npos && ref[first] == '{')
		return parse_spec(ref);
	return ref_from_json(json(ref), ".", "--spec");
}

std::vector<TheoremInstance> parse_batch(const std::string &json_text,
                                         const std::string &base_dir,
                                         const std::string &origin)
{
	json doc = parse_text(json_text, origin);
	if (!doc.is_object() || !doc.contains("instances") || !doc["instances"].is_array())
		throw SchemaError(origin + ": expected an object with an \"instances\" array");
	for (const auto &[key, value] : doc.items())
		if (key != "instances" && key != "tolerance" && key != "eps")
			fail(origin, key, "unknown field");
	double tol = 2e-2, eps = 1e-3;
	if (doc.contains("tolerance"))
		tol = number(doc["tolerance"], origin, "tolerance");
	if (doc.contains("eps"))
		eps = number(doc["eps"], origin, "eps");

	const auto ids = theorem_ids();
	const std::set<std::string> allowed = {"theorem", "theorems", "f", "g", "h", "m",
	                                       "p",       "q",        "sigma", "tolerance"};
	std::vector<TheoremInstance> out;
	const json &list = doc["instances"];
	for (std::size_t i = 0; i < list.size(); ++i) {
		const json &in = list[i];
		std::string where = origin + ": instances[" + std::to_string(i) + "]";
		if (!in.is_object())
			throw SchemaError(where + ": expected an object");
		for (const auto &[key, value] : in.items())
			if (!allowed.count(key))
				fail(where, key, "unknown field");
		for (const char *req : {"f", "g", "h"})
			if (!in.contains(req))
				throw IncompleteInstance(where + ": missing function '" + req + "'");

		std::vector<std::string> names;
		if (in.contains("theorem") == in.contains("theorems"))
			fail(where, "theorems", "give exactly one of \"theorem\" and \"theorems\"");
		const json &t = in.contains("theorem") ? in["theorem"] : in["theorems"];
		if (t.is_string() && t == "all")
			names = ids;
		else if (t.is_string())
			names.push_back(t);
		else if (t.is_array())
			for (const auto &x : t) {
				if (!x.is_string())
					fail(where, "theorems", "expected theorem id strings");
				names.push_back(x);
			}
		else
			fail(where, "theorems", "expected an id, a list of ids or \"all\"");
		for (const auto &n : names)
			if (std::find(ids.begin(), ids.end(), n) == ids.end())
				fail(where, "theorems", "unknown theorem id '" + n + "'");

		Triple tr;
		tr.f = ref_from_json(in["f"], base_dir, where + ".f");
		tr.g = ref_from_json(in["g"], base_dir, where + ".g");
		tr.h = ref_from_json(in["h"], base_dir, where + ".h");
		tr.m = in.contains("m") ? index(in["m"], where, "m") : 0;
		tr.p = in.contains("p") ? index(in["p"], where, "p") : 0;
		tr.q = in.contains("q") ? index(in["q"], where, "q") : 0;
		if (in.contains("sigma"))
			tr.grid = grid_field(in["sigma"], where, "sigma");
		double itol = in.contains("tolerance") ? number(in["tolerance"], where, "tolerance")
		                                       : tol;
		if (!(itol > 0) || !(eps > 0 && eps < 1))
			throw SchemaError(where + ": tolerance must be > 0 and eps inside (0, 1)");
		for (const auto &n : names)
			out.push_back({n, tr, itol, eps});
	}
	return out;
}

std::vector<TheoremInstance> load_batch(const std::string &path)
{
	std::string dir = fs::path(path).parent_path().string();
	return parse_batch(read_file(path), dir.empty() ? "." : dir, path);
}

} // namespace dsg
