#pragma once

#include <stdexcept>
#include <string>

namespace mgc {

// Exit-code mapping used by the CLI:
//   ParseError        -> 2
//   AssumptionError   -> 3  (connectivity, reference voltage, stability regime)
//   NumericalError    -> 4
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Malformed graph input: duplicate endpoints, self-loops, bad ids.
class GraphError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class AssumptionError : public Error {
public:
    enum class Kind { ReferenceVoltage, Connectivity, StabilityRegime, Malformed };

    AssumptionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Asked for a quantity that is only defined under D = I or a commuting product.
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace mgc
