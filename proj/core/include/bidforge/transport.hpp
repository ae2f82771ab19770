// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bidforge {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Balanced transportation problem: move `supply` onto `demand` at
/// per-unit `cost(i, j)`.
struct TransportProblem {
    std::vector<double> supply;
    std::vector<double> demand;
    Matrix cost;
};

struct TransportSolution {
    Matrix flow;
    double objective = 0.0;
    std::size_t pivots = 0;
};

inline constexpr double kMarginalTolerance = 1e-9;
inline constexpr double kBalanceTolerance = 1e-12;

/// Throws InvalidArgument unless supplies/demands are finite and positive,
/// costs finite and non-negative with matching shape, and the totals agree
/// within kBalanceTolerance.
void validate(const TransportProblem& problem);

/// Exact transportation simplex: north-west-corner start, MODI potentials,
/// Bland's rule for both entering (lowest row-major index with negative
/// reduced cost) and leaving (lowest index among the minimum-flow minus
/// cells). Degenerate bases keep explicit zero-flow basic cells, so the
/// basis is always a spanning tree of m + n - 1 cells. Throws
/// NumericalFailure if a marginal residual exceeds kMarginalTolerance.
TransportSolution solve_transport(const TransportProblem& problem);

/// Largest |row sum - supply| or |column sum - demand|.
double marginal_residual(const TransportProblem& problem, const Matrix& flow);

double transport_cost(const Matrix& cost, const Matrix& flow);

} // namespace bidforge
