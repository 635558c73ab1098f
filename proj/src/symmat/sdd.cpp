#include "conecg/conic.hpp"
#include "conecg/symmat.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

namespace conecg {

SddResult sdd_margin(const SymMatrixd& a, const SddOptions& opts) {
  const auto n = a.size();
  const double scale = std::max(1.0, a.norm());
  SddResult res;
  if (n == 0) {
    res.member = true;
    return res;
  }
  if (n == 1) {
    res.margin = a(0, 0);
    res.member = res.margin >= -opts.tol * scale;
    return res;
  }

  conic::Model m;
  m.set_sense(conic::Sense::Maximize);
  const int t = m.add_variable(std::nullopt, 1.0, "t");
  std::vector<conic::LinearExpr> diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i].push_back({t, 1.0});
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const int p = m.add_variable();
      const int q = m.add_variable();
      const int r = m.add_variable();
      m.add_psd2(p, q, r);
      diag[i].push_back({p, 1.0});
      diag[j].push_back({r, 1.0});
      m.add_equality({{q, 1.0}}, a(i, j));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) m.add_equality(diag[i], a(i, i));

  const conic::Solution sol = conic::solve(m);
  if (!sol.optimal())
    throw conic::ConicError("sdd_margin: conic solve ended with status " + conic::to_string(sol.status));
  res.margin = sol.objective;
  res.member = res.margin >= -opts.tol * scale;
  return res;
}

bool is_sdd(const SymMatrixd& a, const SddOptions& opts) { return sdd_margin(a, opts).member; }

SymMatrixd read_matrix(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 0) throw std::runtime_error("read_matrix: missing or invalid dimension");
  Eigen::MatrixXd d(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j)
      if (!(in >> d(i, j)))
        throw std::runtime_error("read_matrix: expected " + std::to_string(n * n) + " entries");
  return SymMatrixd::Symmetrized(d);
}

void write_matrix(std::ostream& out, const SymMatrixd& a) {
  const auto prec = out.precision(17);
  out << a.size() << '\n';
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < a.size(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
  out.precision(prec);
}

}  // namespace conecg
