#ifndef GSTMAR_ERROR_HPP
#define GSTMAR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace gstmar {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Covariance matrix failed the positive-definiteness check.
class DefinitenessError : public Error {
public:
    DefinitenessError(const std::string& msg, int pivot_index, double pivot_value)
        : Error(msg), pivot_index(pivot_index), pivot_value(pivot_value) {}
    int pivot_index;
    double pivot_value;
};

// AR coefficients outside the stationarity region.
class StationarityError : public Error {
public:
    explicit StationarityError(const std::string& msg) : Error(msg) {}
};

// Scalar parameter outside its admissible range (dof <= 2, variance <= 0, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Non-finite value encountered while accumulating a log-likelihood.
class LikelihoodError : public Error {
public:
    LikelihoodError(const std::string& msg, long t_index)
        : Error(msg), t_index(t_index) {}
    long t_index;
};

// Packed parameter vector violates the model parameter space.
class ConstraintError : public Error {
public:
    ConstraintError(const std::string& msg, std::vector<std::string> violations)
        : Error(msg), violations(std::move(violations)) {}
    std::vector<std::string> violations;
};

// Malformed or gapped input data.
class IngestError : public Error {
public:
    explicit IngestError(const std::string& msg) : Error(msg) {}
};

} // namespace gstmar

#endif
