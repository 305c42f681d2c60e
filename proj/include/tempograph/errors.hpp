#pragma once

#include <stdexcept>
#include <string>

namespace tempograph {

// A pattern matched syntactically but names a date that does not exist
// (e.g. "Feb 30, 1990") or a range whose end precedes its start.
class MalformedDate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Surface text matches none of the supported time-expression patterns.
class UnsupportedPattern : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The composition-table generator produced a cell that breaks inverse symmetry.
class OracleInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Annotation references a missing item, carries an unknown relation label,
// or otherwise cannot be turned into a graph.
class BadAnnotation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two spans that must both be wrapped in delimiters overlap.
class OverlapConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tempograph
