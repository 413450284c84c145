#pragma once

#include <stdexcept>
#include <string>

namespace dsg {

// Base of every error the library raises. The CLI maps the subclasses onto
// exit codes: schema/usage problems are 2, numeric failures are 3.
struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
	using Error::Error;
};

// iterated log of a non-positive value
struct DomainError : Error {
	using Error::Error;
};

// value does not fit into a machine double
struct OverflowError : Error {
	using Error::Error;
};

// inversion could not bracket the target
struct RangeError : Error {
	using Error::Error;
};

// series generator or truncation failure
struct SeriesError : Error {
	using Error::Error;
};

struct MonotonicityError : Error {
	using Error::Error;
};

// a type/weak type requested with an order outside (0, inf)
struct IndicatorUndefined : Error {
	using Error::Error;
};

struct DetectionFailed : Error {
	using Error::Error;
};

struct IncompleteInstance : Error {
	using Error::Error;
};

// document does not match the schema
struct SchemaError : Error {
	using Error::Error;
};

} // namespace dsg
