#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fso {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The beam is (numerically) parallel to the detector plane, or a tracking
// constant is non-finite.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

// A Monte Carlo trial failed; carries the index of the offending trial.
class TrialFailure : public Error {
public:
    TrialFailure(const std::string& what, std::uint64_t trial_index)
        : Error(what), trial_index_(trial_index) {}

    std::uint64_t trial_index() const noexcept { return trial_index_; }

private:
    std::uint64_t trial_index_;
};

// Goodness-of-fit test has too few populated categories to say anything.
class InconclusiveTest : public Error {
public:
    using Error::Error;
};

}  // namespace fso
