#pragma once

#include <vector>

#include "ftloc/common.hpp"

namespace ftloc {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vec x;
    double objective = 0.0;
    int iterations = 0;
};

// minimize c^T x  s.t.  ub rows <= rhs,  eq rows == rhs,
// x_j >= 0 unless marked free. Dense two-phase simplex with Bland's rule.
class LinearProgram {
public:
    explicit LinearProgram(Eigen::Index n);

    Eigen::Index num_vars() const { return c_.size(); }
    Vec& cost() { return c_; }
    const Vec& cost() const { return c_; }
    void set_free(Eigen::Index j, bool f = true) { free_[j] = f; }
    bool is_free(Eigen::Index j) const { return free_[j]; }

    void add_ub(const Vec& row, double rhs);
    void add_eq(const Vec& row, double rhs);
    Vec zero_row() const { return Vec::Zero(c_.size()); }

    const std::vector<Vec>& ub_rows() const { return ub_; }
    const std::vector<double>& ub_rhs() const { return ub_rhs_; }
    const std::vector<Vec>& eq_rows() const { return eq_; }
    const std::vector<double>& eq_rhs() const { return eq_rhs_; }

private:
    Vec c_;
    std::vector<bool> free_;
    std::vector<Vec> ub_, eq_;
    std::vector<double> ub_rhs_, eq_rhs_;
};

LpResult solve_lp(const LinearProgram& lp, int max_iterations = 200000);

const char* to_string(LpStatus s);

}  // namespace ftloc
