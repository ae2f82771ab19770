// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/transport.hpp"

#include "bidforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bidforge {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Basis bookkeeping. Nodes 0..m-1 are rows, m..m+n-1 are columns; every
// basic cell (i, j) is a tree edge between node i and node m + j.
class Basis {
public:
    Basis(std::size_t m, std::size_t n) : m_(m), n_(n), basic_(m * n, 0) {}

    bool is_basic(std::size_t i, std::size_t j) const { return basic_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool on) { basic_[i * n_ + j] = on ? 1 : 0; }

    // Potentials u (rows) and v (columns) with u[0] = 0 and
    // u[i] + v[j] = cost(i, j) on basic cells.
    void potentials(const Matrix& cost, std::vector<double>& u, std::vector<double>& v) const {
        u.assign(m_, 0.0);
        v.assign(n_, 0.0);
        std::vector<char> seen(m_ + n_, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const auto node = stack.back();
            stack.pop_back();
            if (node < m_) {
                for (std::size_t j = 0; j < n_; ++j) {
                    if (is_basic(node, j) && !seen[m_ + j]) {
                        v[j] = cost(node, j) - u[node];
                        seen[m_ + j] = 1;
                        stack.push_back(m_ + j);
                    }
                }
            } else {
                const auto j = node - m_;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (is_basic(i, j) && !seen[i]) {
                        u[i] = cost(i, j) - v[j];
                        seen[i] = 1;
                        stack.push_back(i);
                    }
                }
            }
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
            throw Error(Errc::NumericalFailure, "transport basis is not a spanning tree");
        }
    }

    // Tree path from row node `row` to column node m + `col`, as the list of
    // cells walked in order starting at `row`.
    std::vector<std::pair<std::size_t, std::size_t>> path(std::size_t row, std::size_t col) const {
        const auto total = m_ + n_;
        std::vector<std::size_t> parent(total, kNone);
        std::vector<std::size_t> queue{row};
        parent[row] = row;
        const auto target = m_ + col;
        for (std::size_t head = 0; head < queue.size() && parent[target] == kNone; ++head) {
            const auto node = queue[head];
            if (node < m_) {
                for (std::size_t j = 0; j < n_; ++j) {
                    if (is_basic(node, j) && parent[m_ + j] == kNone) {
                        parent[m_ + j] = node;
                        queue.push_back(m_ + j);
                    }
                }
            } else {
                const auto j = node - m_;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (is_basic(i, j) && parent[i] == kNone) {
                        parent[i] = node;
                        queue.push_back(i);
                    }
                }
            }
        }
        if (parent[target] == kNone) {
            throw Error(Errc::NumericalFailure, "transport basis is disconnected");
        }
        std::vector<std::pair<std::size_t, std::size_t>> cells;
        for (auto node = target; node != row; node = parent[node]) {
            const auto prev = parent[node];
            cells.emplace_back(node < m_ ? node : prev, node < m_ ? prev - m_ : node - m_);
        }
        std::reverse(cells.begin(), cells.end());
        return cells;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<char> basic_;
};

} // namespace

void validate(const TransportProblem& p) {
    const auto m = p.supply.size();
    const auto n = p.demand.size();
    if (m == 0 || n == 0) throw Error(Errc::InvalidArgument, "transport problem needs supply and demand");
    if (p.cost.rows() != m || p.cost.cols() != n) {
        throw Error(Errc::InvalidArgument, "cost matrix is " + std::to_string(p.cost.rows()) + "x" +
                                               std::to_string(p.cost.cols()) + ", expected " +
                                               std::to_string(m) + "x" + std::to_string(n));
    }
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!std::all_of(p.supply.begin(), p.supply.end(), positive) ||
        !std::all_of(p.demand.begin(), p.demand.end(), positive)) {
        throw Error(Errc::InvalidArgument, "supplies and demands must be finite and positive");
    }
    for (double c : p.cost.data()) {
        if (!std::isfinite(c) || c < 0.0) {
            throw Error(Errc::InvalidArgument, "costs must be finite and non-negative");
        }
    }
    const double s = std::accumulate(p.supply.begin(), p.supply.end(), 0.0);
    const double d = std::accumulate(p.demand.begin(), p.demand.end(), 0.0);
    if (std::abs(s - d) > kBalanceTolerance * std::max(1.0, s)) {
        throw Error(Errc::InvalidArgument, "unbalanced problem: supply " + std::to_string(s) +
                                               " vs demand " + std::to_string(d));
    }
}

double marginal_residual(const TransportProblem& p, const Matrix& flow) {
    double worst = 0.0;
    for (std::size_t i = 0; i < flow.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < flow.cols(); ++j) s += flow(i, j);
        worst = std::max(worst, std::abs(s - p.supply[i]));
    }
    for (std::size_t j = 0; j < flow.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < flow.rows(); ++i) s += flow(i, j);
        worst = std::max(worst, std::abs(s - p.demand[j]));
    }
    return worst;
}

double transport_cost(const Matrix& cost, const Matrix& flow) {
    double total = 0.0;
    for (std::size_t i = 0; i < flow.rows(); ++i) {
        for (std::size_t j = 0; j < flow.cols(); ++j) total += flow(i, j) * cost(i, j);
    }
    return total;
}

TransportSolution solve_transport(const TransportProblem& p) {
    validate(p);
    const auto m = p.supply.size();
    const auto n = p.demand.size();

    TransportSolution sol;
    sol.flow = Matrix(m, n);
    Basis basis(m, n);

    // North-west corner. When a row and a column are exhausted together we
    // step down a row only, so the next cell enters the basis at zero flow.
    {
        auto rem_s = p.supply;
        auto rem_d = p.demand;
        std::size_t i = 0;
        std::size_t j = 0;
        while (true) {
            const double x = std::min(rem_s[i], rem_d[j]);
            sol.flow(i, j) = x;
            basis.set(i, j, true);
            rem_s[i] -= x;
            rem_d[j] -= x;
            if (i == m - 1 && j == n - 1) break;
            if (i == m - 1) {
                ++j;
            } else if (j == n - 1) {
                ++i;
            } else if (rem_s[i] <= rem_d[j]) {
                ++i;
            } else {
                ++j;
            }
        }
        // Any residual imbalance (<= kBalanceTolerance) lands on the last cell.
        sol.flow(m - 1, n - 1) += std::max(0.0, std::min(rem_s[m - 1], rem_d[n - 1]));
    }

    double max_cost = 0.0;
    for (double c : p.cost.data()) max_cost = std::max(max_cost, c);
    const double tol = 1e-12 * std::max(1.0, max_cost);
    const std::size_t max_pivots = 1000 + 50 * (m + n) * m * n;

    std::vector<double> u;
    std::vector<double> v;
    while (true) {
        basis.potentials(p.cost, u, v);
        std::size_t ei = kNone;
        std::size_t ej = kNone;
        for (std::size_t i = 0; i < m && ei == kNone; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (basis.is_basic(i, j)) continue;
                if (p.cost(i, j) - u[i] - v[j] < -tol) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        }
        if (ei == kNone) break;
        if (++sol.pivots > max_pivots) {
            throw Error(Errc::NumericalFailure, "transport simplex exceeded its pivot budget");
        }

        // Cycle: entering cell (+), then path cells alternate -, +, -, ...
        const auto cycle = basis.path(ei, ej);
        std::size_t leave = kNone;
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cycle.size(); k += 2) {
            const auto [ci, cj] = cycle[k];
            const double f = sol.flow(ci, cj);
            const auto idx = ci * n + cj;
            if (f < theta || (f == theta && idx < leave)) {
                theta = f;
                leave = idx;
            }
        }
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const auto [ci, cj] = cycle[k];
            if (k % 2 == 0) {
                sol.flow(ci, cj) -= theta;
            } else {
                sol.flow(ci, cj) += theta;
            }
        }
        sol.flow(ei, ej) = theta;
        basis.set(ei, ej, true);
        sol.flow(leave / n, leave % n) = 0.0;
        basis.set(leave / n, leave % n, false);
    }

    const double residual = marginal_residual(p, sol.flow);
    if (residual > kMarginalTolerance) {
        throw Error(Errc::NumericalFailure,
                    "marginal residual " + std::to_string(residual) + " after solve");
    }
    sol.objective = transport_cost(p.cost, sol.flow);
    return sol;
}

} // namespace bidforge
