#pragma once

#include <stdexcept>
#include <string>

namespace c3g {

/// Malformed input: bad files, out-of-range parameters, unknown ids.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The admittance system is singular or too ill-conditioned to trust, which
/// in practice means the drive frequency sits on a circuit resonance.
class ResonanceError : public std::runtime_error {
public:
    ResonanceError(const std::string &what, double condition)
        : std::runtime_error(what), condition_(condition) {}

    double condition() const { return condition_; }

private:
    double condition_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace c3g
