#pragma once

#include <stdexcept>
#include <string>

namespace uaviov {

// Invalid configuration (bad bounds, malformed weights, infeasible setup).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Violated call contract (out-of-range action, shape mismatch, bad handle use).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// Input outside the modeled domain (e.g. position outside the simulation area).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Stored blob fails its digest check.
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// Lookup failed (unknown model, missing blob, missing file).
class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uaviov
