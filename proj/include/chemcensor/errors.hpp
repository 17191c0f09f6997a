//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_ERRORS_HPP_
#define CHEMCENSOR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace chemcensor {

// Base class for every error this library raises on bad chemistry input or
// bad configuration. Catching ChemError is enough to turn any input problem
// into a scoring category.
class ChemError : public std::runtime_error {
public:
  explicit ChemError(const std::string &what) : std::runtime_error(what) { }
};

// Malformed SMILES/SMARTS/reaction text: unbalanced brackets, dangling ring
// closures, unknown symbols, aromatic atoms outside rings.
class SyntaxError : public ChemError {
public:
  explicit SyntaxError(const std::string &what)
      : ChemError("syntax error: " + what) { }
};

// Bond-order sum exceeds the allowed valence for an organic-subset atom.
class ValenceError : public ChemError {
public:
  explicit ValenceError(const std::string &what)
      : ChemError("valence error: " + what) { }
};

// SMARTS construct outside the supported subset (recursive SMARTS,
// component grouping, chirality primitives). Reported, never ignored.
class UnsupportedFeatureError : public ChemError {
public:
  explicit UnsupportedFeatureError(const std::string &what)
      : ChemError("unsupported feature: " + what) { }
};

// Atom-map bookkeeping problems: duplicate nonzero map on one side, element
// mismatch across sides, mapped product atom without reactant counterpart.
class MapError : public ChemError {
public:
  explicit MapError(const std::string &what)
      : ChemError("atom-map error: " + what) { }
};

// Heuristic mapper could not cover enough of the product.
class MappingFailedError : public ChemError {
public:
  MappingFailedError(const std::string &what, double coverage)
      : ChemError("mapping failed: " + what), coverage_(coverage) { }
  double coverage() const { return coverage_; }

private:
  double coverage_;
};

// Identity reaction: no atom changes between the two sides.
class EmptyCenterError : public ChemError {
public:
  explicit EmptyCenterError(const std::string &what)
      : ChemError("empty reaction center: " + what) { }
};

// KB persistence and merge errors.
class IOError : public ChemError {
public:
  explicit IOError(const std::string &what) : ChemError("io error: " + what) { }
};

class FormatError : public ChemError {
public:
  explicit FormatError(const std::string &what)
      : ChemError("format error: " + what) { }
};

class VersionError : public ChemError {
public:
  explicit VersionError(const std::string &what)
      : ChemError("version error: " + what) { }
};

class MetadataMismatchError : public ChemError {
public:
  explicit MetadataMismatchError(const std::string &what)
      : ChemError("metadata mismatch: " + what) { }
};

// Scorer/harness initialization problems (library vs KB digest, bad config).
class ConfigError : public ChemError {
public:
  explicit ConfigError(const std::string &what)
      : ChemError("config error: " + what) { }
};

// Endpoint rejected the credentials; retrying cannot help.
class AuthError : public ChemError {
public:
  explicit AuthError(const std::string &what)
      : ChemError("auth error: " + what) { }
};

// Endpoint kept failing after retries; surfaced per sample, never fatal.
class EndpointError : public ChemError {
public:
  explicit EndpointError(const std::string &what)
      : ChemError("endpoint error: " + what) { }
};

// Aggregation over an empty benchmark.
class EmptyBenchmarkError : public ChemError {
public:
  explicit EmptyBenchmarkError(const std::string &what)
      : ChemError("empty benchmark: " + what) { }
};

// Few-shot pool smaller than the requested example count.
class PoolTooSmallError : public ChemError {
public:
  explicit PoolTooSmallError(const std::string &what)
      : ChemError("few-shot pool too small: " + what) { }
};

}  // namespace chemcensor

#endif  // CHEMCENSOR_ERRORS_HPP_
