#pragma once

#include <stdexcept>
#include <string>

namespace thfield {

// Evaluation landed exactly on an integrable kernel singularity; callers
// tabulating singular kernels must use cell averages instead.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Spectral application of an operator left an imaginary residue above
// threshold: the grid is too small for the kernel's spread.
class AliasingError : public std::runtime_error {
public:
    explicit AliasingError(const std::string& what) : std::runtime_error(what) {}
};

// Combinatorial work for a high-order multiple integral exceeds the
// configured budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Covariance matrix failed to factor even after the maximum ridge.
class ConditioningError : public std::runtime_error {
public:
    explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

// Parameters fall outside the range where the requested representation
// exists (e.g. the semimartingale decomposition for H <= 1).
class UnsupportedRangeError : public std::runtime_error {
public:
    explicit UnsupportedRangeError(const std::string& what) : std::runtime_error(what) {}
};

class GridMismatchError : public std::runtime_error {
public:
    explicit GridMismatchError(const std::string& what) : std::runtime_error(what) {}
};

}
