#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace conecg::conic {

enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(Status s);

class ConicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  int var;
  double coef;
};
using LinearExpr = std::vector<Term>;

/// LP/SOCP model builder. Variables are free unless given a lower bound.
/// Constraints are linear equalities, linear "≥" inequalities and 2×2 psd
/// triples [[a1,a2],[a2,a3]] ⪰ 0.
class Model {
 public:
  struct Variable {
    std::optional<double> lower;
    double cost = 0;
    std::string name;
  };
  struct Row {
    LinearExpr expr;
    double rhs = 0;
  };
  struct Psd2 {
    int a1, a2, a3;
  };

  int add_variable(std::optional<double> lower = std::nullopt, double cost = 0,
                   std::string name = {});
  void set_sense(Sense s) { sense_ = s; }
  void set_cost(int var, double c);

  int add_equality(LinearExpr expr, double rhs);
  /// expr ≥ rhs
  int add_inequality(LinearExpr expr, double rhs);
  int add_psd2(int a1, int a2, int a3);

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(vars_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& equalities() const { return eqs_; }
  const std::vector<Row>& inequalities() const { return ineqs_; }
  const std::vector<Psd2>& psd2_constraints() const { return psd2_; }

  /// Throws ConicError on out-of-range indices, repeated psd2 variables or
  /// non-finite data.
  void validate() const;

  /// Human-readable listing, one item per line:
  ///   sense min|max
  ///   var <index> <name> lb=<value|free> cost=<value>
  ///   eq <row>: <coef>*x<i> + ... = <rhs>
  ///   ge <row>: <coef>*x<i> + ... >= <rhs>
  ///   psd2 <k>: x<a1> x<a2> x<a3>
  void dump(std::ostream& out) const;

 private:
  void check_var(int v) const;

  Sense sense_ = Sense::Minimize;
  std::vector<Variable> vars_;
  std::vector<Row> eqs_;
  std::vector<Row> ineqs_;
  std::vector<Psd2> psd2_;
};

struct Params {
  double feas_tol = 1e-8;
  double abs_gap_tol = 1e-8;
  double rel_gap_tol = 1e-8;
  // When the iteration stalls, an iterate meeting these looser tolerances is
  // still reported Optimal, with Solution::reduced_accuracy set.
  double reduced_feas_tol = 1e-6;
  double reduced_gap_tol = 1e-6;
  int max_iters = 150;
  double time_limit_s = std::numeric_limits<double>::infinity();
  bool equilibrate = true;
  bool verbose = false;
};

/// Dual sign convention. With aᵢ the rows of the equalities, gⱼ the rows of
/// the "≥" inequalities and eₖ the lower-bounded variables:
///   min:  c = Σ dual_eq_i aᵢ + Σ dual_ineq_j gⱼ + Σ reduced_cost_k eₖ + (psd2 terms)
///   max:  c = Σ dual_eq_i aᵢ − Σ dual_ineq_j gⱼ − Σ reduced_cost_k eₖ − (psd2 terms)
/// so dual_eq is always the sensitivity of the optimal value to the equality
/// right-hand sides, and dual_ineq / reduced_cost are nonnegative.
struct Solution {
  Status status = Status::NumericalFailure;
  bool reduced_accuracy = false;
  bool time_limit_reached = false;
  Eigen::VectorXd primal;
  Eigen::VectorXd dual_eq;
  Eigen::VectorXd dual_ineq;
  Eigen::VectorXd reduced_cost;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

/// Homogeneous self-dual interior-point solve (Nesterov–Todd scaling,
/// Mehrotra predictor–corrector). Deterministic for a fixed model and params.
Solution solve(const Model& model, const Params& params = {});

}  // namespace conecg::conic
