#pragma once

#include "conecg/conic.hpp"
#include "cones.hpp"

#include <Eigen/Sparse>

namespace conecg::conic::detail {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// min cᵀx  s.t.  Ax = b,  Gx + s = h,  s ∈ K
/// Dual:  max −bᵀy − hᵀz  s.t.  c + Aᵀy + Gᵀz = 0,  z ∈ K
struct ConeProgram {
  SpMat a;
  Eigen::VectorXd b;
  SpMat g;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  ConeSpec cones;
};

enum class IpmStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIters, Stalled, TimeLimit };

struct IpmResult {
  IpmStatus status = IpmStatus::Stalled;
  bool reduced_accuracy = false;
  Eigen::VectorXd x, y, z, s;  // divided by τ for Optimal; raw certificate otherwise
  int iterations = 0;
  double pres = 0, dres = 0, gap = 0, pcost = 0, dcost = 0;
};

IpmResult solve_cone_program(const ConeProgram& prob, const Params& params);

}  // namespace conecg::conic::detail
