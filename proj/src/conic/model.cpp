#include "conecg/conic.hpp"

#include "ipm.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <set>

namespace conecg::conic {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

int Model::add_variable(std::optional<double> lower, double cost, std::string name) {
  vars_.push_back({lower, cost, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

void Model::set_cost(int var, double c) {
  check_var(var);
  vars_[var].cost = c;
}

int Model::add_equality(LinearExpr expr, double rhs) {
  eqs_.push_back({std::move(expr), rhs});
  return static_cast<int>(eqs_.size()) - 1;
}

int Model::add_inequality(LinearExpr expr, double rhs) {
  ineqs_.push_back({std::move(expr), rhs});
  return static_cast<int>(ineqs_.size()) - 1;
}

int Model::add_psd2(int a1, int a2, int a3) {
  psd2_.push_back({a1, a2, a3});
  return static_cast<int>(psd2_.size()) - 1;
}

void Model::check_var(int v) const {
  if (v < 0 || v >= num_variables())
    throw ConicError("variable index " + std::to_string(v) + " out of range");
}

void Model::validate() const {
  for (const auto& v : vars_) {
    if (!std::isfinite(v.cost)) throw ConicError("non-finite objective coefficient");
    if (v.lower && !std::isfinite(*v.lower)) throw ConicError("non-finite lower bound");
  }
  auto check_rows = [&](const std::vector<Row>& rows) {
    for (const auto& r : rows) {
      if (!std::isfinite(r.rhs)) throw ConicError("non-finite right-hand side");
      for (const auto& t : r.expr) {
        check_var(t.var);
        if (!std::isfinite(t.coef)) throw ConicError("non-finite constraint coefficient");
      }
    }
  };
  check_rows(eqs_);
  check_rows(ineqs_);
  for (const auto& p : psd2_) {
    check_var(p.a1);
    check_var(p.a2);
    check_var(p.a3);
    if (p.a1 == p.a2 || p.a1 == p.a3 || p.a2 == p.a3)
      throw ConicError("psd2 constraint repeats a variable");
  }
}

void Model::dump(std::ostream& out) const {
  out << "sense " << (sense_ == Sense::Minimize ? "min" : "max") << '\n';
  for (int i = 0; i < num_variables(); ++i) {
    const auto& v = vars_[i];
    out << "var " << i << ' ' << (v.name.empty() ? "-" : v.name) << " lb=";
    if (v.lower) out << *v.lower; else out << "free";
    out << " cost=" << v.cost << '\n';
  }
  auto expr = [&](const LinearExpr& e) {
    if (e.empty()) out << '0';
    for (std::size_t k = 0; k < e.size(); ++k)
      out << (k ? " + " : "") << e[k].coef << "*x" << e[k].var;
  };
  for (std::size_t r = 0; r < eqs_.size(); ++r) {
    out << "eq " << r << ": ";
    expr(eqs_[r].expr);
    out << " = " << eqs_[r].rhs << '\n';
  }
  for (std::size_t r = 0; r < ineqs_.size(); ++r) {
    out << "ge " << r << ": ";
    expr(ineqs_[r].expr);
    out << " >= " << ineqs_[r].rhs << '\n';
  }
  for (std::size_t k = 0; k < psd2_.size(); ++k)
    out << "psd2 " << k << ": x" << psd2_[k].a1 << " x" << psd2_[k].a2 << " x" << psd2_[k].a3 << '\n';
}

namespace {

using detail::SpMat;
using Triplet = Eigen::Triplet<double, int>;

// Sums repeated variables and drops zeros.
std::map<int, double> collect(const LinearExpr& e) {
  std::map<int, double> m;
  for (const auto& t : e) m[t.var] += t.coef;
  for (auto it = m.begin(); it != m.end();) it = it->second == 0.0 ? m.erase(it) : std::next(it);
  return m;
}

}  // namespace

Solution solve(const Model& model, const Params& params) {
  model.validate();
  const int n = model.num_variables();
  const bool maximize = model.sense() == Sense::Maximize;
  Solution sol;

  detail::ConeProgram prog;
  prog.c.resize(n);
  for (int j = 0; j < n; ++j) prog.c[j] = maximize ? -model.variables()[j].cost : model.variables()[j].cost;

  // Equalities; empty rows are either vacuous or make the model infeasible.
  std::vector<Triplet> at;
  std::vector<double> b;
  std::vector<int> eq_row(model.equalities().size(), -1);
  for (std::size_t r = 0; r < model.equalities().size(); ++r) {
    const auto& row = model.equalities()[r];
    const auto terms = collect(row.expr);
    if (terms.empty()) {
      if (row.rhs != 0.0) {
        sol.status = Status::Infeasible;
        return sol;
      }
      continue;
    }
    eq_row[r] = static_cast<int>(b.size());
    for (const auto& [v, c] : terms) at.emplace_back(static_cast<int>(b.size()), v, c);
    b.push_back(row.rhs);
  }

  // Nonnegative block: lower bounds, then "≥" rows. Then one SOC per psd2.
  std::vector<Triplet> gt;
  std::vector<double> h;
  std::vector<int> lb_row(n, -1);
  for (int j = 0; j < n; ++j) {
    const auto& lo = model.variables()[j].lower;
    if (!lo) continue;
    lb_row[j] = static_cast<int>(h.size());
    gt.emplace_back(static_cast<int>(h.size()), j, -1.0);
    h.push_back(-*lo);
  }
  const int ineq_start = static_cast<int>(h.size());
  for (const auto& row : model.inequalities()) {
    for (const auto& [v, c] : collect(row.expr)) gt.emplace_back(static_cast<int>(h.size()), v, -c);
    h.push_back(-row.rhs);
  }
  prog.cones.nonneg = static_cast<int>(h.size());
  if (model.psd2_constraints().empty() && h.empty()) {
    // Keeps the cone nonempty: 0 ≤ 1.
    h.push_back(1.0);
    prog.cones.nonneg = 1;
  }
  for (const auto& p : model.psd2_constraints()) {
    const int r = static_cast<int>(h.size());
    gt.emplace_back(r, p.a1, -1.0);
    gt.emplace_back(r, p.a3, -1.0);
    gt.emplace_back(r + 1, p.a1, -1.0);
    gt.emplace_back(r + 1, p.a3, 1.0);
    gt.emplace_back(r + 2, p.a2, -2.0);
    h.insert(h.end(), 3, 0.0);
    prog.cones.soc.push_back(3);
  }

  prog.a.resize(static_cast<int>(b.size()), n);
  prog.a.setFromTriplets(at.begin(), at.end());
  prog.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  prog.g.resize(static_cast<int>(h.size()), n);
  prog.g.setFromTriplets(gt.begin(), gt.end());
  prog.h = Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));

  const detail::IpmResult r = detail::solve_cone_program(prog, params);
  sol.iterations = r.iterations;
  sol.reduced_accuracy = r.reduced_accuracy;
  sol.primal_residual = r.pres;
  sol.dual_residual = r.dres;
  sol.gap = r.gap;
  switch (r.status) {
    case detail::IpmStatus::Optimal: sol.status = Status::Optimal; break;
    case detail::IpmStatus::PrimalInfeasible: sol.status = Status::Infeasible; break;
    case detail::IpmStatus::DualInfeasible: sol.status = Status::Unbounded; break;
    case detail::IpmStatus::TimeLimit:
      sol.status = Status::NumericalFailure;
      sol.time_limit_reached = true;
      break;
    default: sol.status = Status::NumericalFailure; break;
  }
  if (sol.status != Status::Optimal) {
    sol.primal = r.x;
    return sol;
  }

  sol.primal = r.x;
  const double sgn = maximize ? 1.0 : -1.0;
  sol.dual_eq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.equalities().size()));
  for (std::size_t k = 0; k < eq_row.size(); ++k)
    if (eq_row[k] >= 0) sol.dual_eq[k] = sgn * r.y[eq_row[k]];
  sol.dual_ineq = r.z.segment(ineq_start, static_cast<Eigen::Index>(model.inequalities().size()));
  sol.reduced_cost = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j)
    if (lb_row[j] >= 0) sol.reduced_cost[j] = r.z[lb_row[j]];
  sol.objective = maximize ? -r.pcost : r.pcost;
  sol.dual_objective = maximize ? -r.dcost : r.dcost;
  return sol;
}

}  // namespace conecg::conic
