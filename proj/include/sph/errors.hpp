#pragma once

#include <stdexcept>
#include <string>

namespace sph {

/// Points or fields of different dimensions were combined.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A standing assumption on (p, n), a gate on the domain, or an
/// operation precondition does not hold.
class HypothesisViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed user input (files, configs, parameters out of range).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A power weight d(x, c)^alpha with alpha <= -n is not locally integrable.
class NotLocallyIntegrable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace sph
