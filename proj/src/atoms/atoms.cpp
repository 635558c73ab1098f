#include "conecg/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace conecg {

namespace {

void check_dim(int n, const SymMatrixd& b) {
  if (b.size() != n) throw std::invalid_argument("atom_value: dimension mismatch");
}

// Smallest eigenvalue of [[p, q], [q, r]].
double min_eig2(double p, double q, double r) {
  return 0.5 * (p + r) - std::hypot(0.5 * (p - r), q);
}

}  // namespace

RankOneAtom RankOneAtom::structured(int n, std::vector<Entry> entries) {
  if (entries.empty()) throw std::invalid_argument("RankOneAtom: zero vector");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.index < 0 || e.index >= n) throw std::invalid_argument("RankOneAtom: index out of range");
    if (e.sign != 1 && e.sign != -1) throw std::invalid_argument("RankOneAtom: sign must be ±1");
    if (k && entries[k - 1].index == e.index) throw std::invalid_argument("RankOneAtom: repeated index");
  }
  if (entries.front().sign < 0)
    for (auto& e : entries) e.sign = -e.sign;
  RankOneAtom a;
  a.n_ = n;
  a.entries_ = std::move(entries);
  return a;
}

RankOneAtom RankOneAtom::dense(const Eigen::VectorXd& u) {
  const double nrm = u.norm();
  if (!(nrm > 0.0) || !u.allFinite()) throw std::invalid_argument("RankOneAtom: zero or non-finite vector");
  RankOneAtom a;
  a.n_ = static_cast<int>(u.size());
  a.dense_ = u / nrm;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (a.dense_[i] != 0.0) {
      if (a.dense_[i] < 0.0) a.dense_ = -a.dense_;
      break;
    }
  }
  return a;
}

Eigen::VectorXd RankOneAtom::vector() const {
  if (!is_structured()) return dense_;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_);
  for (const auto& e : entries_) u[e.index] = e.sign;
  return u;
}

PairAtom PairAtom::structured(int n, int j, int k) {
  if (j > k) std::swap(j, k);
  if (j < 0 || k >= n || j == k) throw std::invalid_argument("PairAtom: invalid index pair");
  PairAtom a;
  a.n_ = n;
  a.j_ = j;
  a.k_ = k;
  return a;
}

PairAtom PairAtom::dense(const Basis& v) {
  if (!v.allFinite()) throw std::invalid_argument("PairAtom: non-finite basis");
  Basis w = v;
  for (int c = 0; c < 2; ++c) {
    const double nrm = w.col(c).norm();
    if (!(nrm > 0.0)) throw std::invalid_argument("PairAtom: zero column");
    w.col(c) /= nrm;
  }
  if (std::abs(w.col(0).dot(w.col(1))) > 1.0 - 1e-12)
    throw std::invalid_argument("PairAtom: columns are linearly dependent");
  PairAtom a;
  a.n_ = static_cast<int>(v.rows());
  a.v_ = std::move(w);
  return a;
}

PairAtom::Basis PairAtom::basis() const {
  if (!is_structured()) return v_;
  Basis v = Basis::Zero(n_, 2);
  v(j_, 0) = 1.0;
  v(k_, 1) = 1.0;
  return v;
}

int atom_dim(const Atom& a) {
  return std::visit([](const auto& x) { return x.dim(); }, a);
}

double atom_value(const RankOneAtom& a, const SymMatrixd& b) {
  check_dim(a.dim(), b);
  if (!a.is_structured()) return b.quad(a.vector());
  const auto& e = a.entries();
  double v = 0;
  for (std::size_t p = 0; p < e.size(); ++p) {
    v += b(e[p].index, e[p].index);
    for (std::size_t q = p + 1; q < e.size(); ++q) v += 2.0 * e[p].sign * e[q].sign * b(e[p].index, e[q].index);
  }
  return v;
}

double atom_value(const PairAtom& a, const SymMatrixd& b) {
  check_dim(a.dim(), b);
  if (a.is_structured()) return min_eig2(b(a.first(), a.first()), b(a.first(), a.second()), b(a.second(), a.second()));
  const PairAtom::Basis v = a.basis();
  const Eigen::Matrix2d m = v.transpose() * b.dense() * v;
  return min_eig2(m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1));
}

double atom_value(const Atom& a, const SymMatrixd& b) {
  return std::visit([&](const auto& x) { return atom_value(x, b); }, a);
}

std::string to_string(const Atom& a) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* r = std::get_if<RankOneAtom>(&a)) {
    if (r->is_structured()) {
      os << 'u';
      for (const auto& e : r->entries()) os << ' ' << e.index << ':' << (e.sign > 0 ? "1" : "-1");
    } else {
      const Eigen::VectorXd u = r->vector();
      os << "d " << u.size();
      for (Eigen::Index i = 0; i < u.size(); ++i) os << ' ' << u[i];
    }
  } else {
    const auto& p = std::get<PairAtom>(a);
    const PairAtom::Basis v = p.basis();
    os << "V " << v.rows() << " 2";
    for (int c = 0; c < 2; ++c)
      for (Eigen::Index i = 0; i < v.rows(); ++i) os << ' ' << v(i, c);
  }
  return os.str();
}

Atom parse_atom(const std::string& line, int dim) {
  std::istringstream in(line);
  std::string tag;
  if (!(in >> tag)) throw std::invalid_argument("parse_atom: empty line");
  if (tag == "u") {
    std::vector<RankOneAtom::Entry> e;
    std::string tok;
    while (in >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("parse_atom: expected index:sign");
      try {
        e.push_back({std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
      } catch (const std::logic_error&) {
        throw std::invalid_argument("parse_atom: bad index:sign token '" + tok + "'");
      }
    }
    return RankOneAtom::structured(dim, std::move(e));
  }
  if (tag == "d") {
    int n = 0;
    if (!(in >> n) || n != dim) throw std::invalid_argument("parse_atom: bad dimension");
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i)
      if (!(in >> u[i])) throw std::invalid_argument("parse_atom: missing entry");
    return RankOneAtom::dense(u);
  }
  if (tag == "V") {
    int n = 0, two = 0;
    if (!(in >> n >> two) || n != dim || n < 2 || two != 2) throw std::invalid_argument("parse_atom: bad pair header");
    PairAtom::Basis v(n, 2);
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < n; ++i)
        if (!(in >> v(i, c))) throw std::invalid_argument("parse_atom: missing entry");
    // A basis made of two distinct unit vectors is the structured atom.
    int j = -1, k = -1;
    bool unit = true;
    for (int c = 0; c < 2 && unit; ++c) {
      int hit = -1;
      for (int i = 0; i < n; ++i) {
        if (v(i, c) == 1.0 && hit < 0) hit = i;
        else if (v(i, c) != 0.0) unit = false;
      }
      if (hit < 0) unit = false;
      (c == 0 ? j : k) = hit;
    }
    if (unit && j < k) return PairAtom::structured(n, j, k);
    return PairAtom::dense(v);
  }
  throw std::invalid_argument("parse_atom: unknown tag '" + tag + "'");
}

std::string AtomSet::key(const Atom& a) const {
  if (const auto* r = std::get_if<RankOneAtom>(&a)) {
    if (!r->is_structured()) return {};
    std::string k = "u" + std::to_string(r->dim());
    for (const auto& e : r->entries()) k += (e.sign > 0 ? '+' : '-') + std::to_string(e.index);
    return k;
  }
  const auto& p = std::get<PairAtom>(a);
  if (!p.is_structured()) return {};
  return "V" + std::to_string(p.dim()) + ":" + std::to_string(p.first()) + "," + std::to_string(p.second());
}

bool AtomSet::dense_duplicate(const Atom& a) const {
  for (std::size_t idx : dense_) {
    const Atom& b = atoms_[idx];
    if (a.index() != b.index() || atom_dim(a) != atom_dim(b)) continue;
    if (const auto* r = std::get_if<RankOneAtom>(&a)) {
      const Eigen::VectorXd u = r->vector();
      const Eigen::VectorXd w = std::get<RankOneAtom>(b).vector();
      if ((u - u.dot(w) * w).norm() <= tol_) return true;
    } else {
      // Orthogonal projectors onto the two column spaces.
      auto projector = [](const PairAtom::Basis& v) {
        Eigen::HouseholderQR<PairAtom::Basis> qr(v);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(v.rows(), 2);
        return Eigen::MatrixXd(q * q.transpose());
      };
      const Eigen::MatrixXd pa = projector(std::get<PairAtom>(a).basis());
      const Eigen::MatrixXd pb = projector(std::get<PairAtom>(b).basis());
      if ((pa - pb).norm() <= tol_) return true;
    }
  }
  return false;
}

bool AtomSet::contains(const Atom& a) const {
  const std::string k = key(a);
  if (!k.empty()) return keys_.count(k) > 0;
  return dense_duplicate(a);
}

bool AtomSet::add(const Atom& a) {
  const std::string k = key(a);
  if (!k.empty()) {
    if (!keys_.insert(k).second) return false;
  } else {
    if (dense_duplicate(a)) return false;
    dense_.push_back(atoms_.size());
  }
  atoms_.push_back(a);
  return true;
}

AtomSet gen_U2(int n) {
  if (n < 1) throw std::invalid_argument("gen_U2: n must be positive");
  AtomSet s;
  for (int i = 0; i < n; ++i) s.add(RankOneAtom::unit(n, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      s.add(RankOneAtom::structured(n, {{i, 1}, {j, 1}}));
      s.add(RankOneAtom::structured(n, {{i, 1}, {j, -1}}));
    }
  return s;
}

AtomSet gen_V2(int n) {
  if (n < 2) throw std::invalid_argument("gen_V2: n must be at least 2");
  AtomSet s;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) s.add(PairAtom::structured(n, j, k));
  return s;
}

TripleCursor::TripleCursor(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("TripleCursor: n must be positive");
  reset();
}

void TripleCursor::reset() {
  pos_ = 0;
  cur_ = Triple{1, {0, -1, -1}, {1, 1, 1}};
}

std::uint64_t TripleCursor::cycle_length() const {
  const std::uint64_t n = static_cast<std::uint64_t>(n_);
  return n + n * (n - 1) + (n >= 3 ? 4 * (n * (n - 1) * (n - 2) / 6) : 0);
}

void TripleCursor::advance() {
  auto next_i = [&](int i) {
    if (i + 1 < n_) {
      cur_ = Triple{1, {i + 1, -1, -1}, {1, 1, 1}};
      ++pos_;
    } else {
      reset();
    }
  };
  auto next_j = [&](int i, int j) {
    if (j + 1 < n_) {
      cur_ = Triple{2, {i, j + 1, -1}, {1, 1, 1}};
      ++pos_;
    } else {
      next_i(i);
    }
  };
  Triple& t = cur_;
  switch (t.size) {
    case 1:
      next_j(t.idx[0], t.idx[0]);
      return;
    case 2:
      if (t.sign[1] > 0) {
        t.sign[1] = -1;
        ++pos_;
      } else if (t.idx[1] + 1 < n_) {
        cur_ = Triple{3, {t.idx[0], t.idx[1], t.idx[1] + 1}, {1, 1, 1}};
        ++pos_;
      } else {
        next_j(t.idx[0], t.idx[1]);
      }
      return;
    default:
      if (!(t.sign[1] < 0 && t.sign[2] < 0)) {
        // (+,+) → (+,−) → (−,+) → (−,−)
        if (t.sign[2] > 0) {
          t.sign[2] = -1;
        } else {
          t.sign[1] = -1;
          t.sign[2] = 1;
        }
        ++pos_;
      } else if (t.idx[2] + 1 < n_) {
        cur_ = Triple{3, {t.idx[0], t.idx[1], t.idx[2] + 1}, {1, 1, 1}};
        ++pos_;
      } else {
        next_j(t.idx[0], t.idx[1]);
      }
      return;
  }
}

RankOneAtom TripleCursor::atom() const {
  std::vector<RankOneAtom::Entry> e;
  for (int a = 0; a < cur_.size; ++a) e.push_back({cur_.idx[a], cur_.sign[a]});
  return RankOneAtom::structured(n_, std::move(e));
}

std::string TripleCursor::save() const {
  std::ostringstream os;
  os << pos_ << ' ' << cur_.size;
  for (int a = 0; a < 3; ++a) os << ' ' << cur_.idx[a];
  for (int a = 0; a < 3; ++a) os << ' ' << cur_.sign[a];
  return os.str();
}

TripleCursor TripleCursor::restore(int n, const std::string& state) {
  TripleCursor c(n);
  std::istringstream in(state);
  Triple t{};
  std::uint64_t pos = 0;
  if (!(in >> pos >> t.size >> t.idx[0] >> t.idx[1] >> t.idx[2] >> t.sign[0] >> t.sign[1] >> t.sign[2]))
    throw std::invalid_argument("TripleCursor: malformed state");
  bool ok = t.size >= 1 && t.size <= 3 && pos < c.cycle_length() && t.sign[0] == 1;
  for (int a = 0; ok && a < t.size; ++a) {
    ok = t.idx[a] >= 0 && t.idx[a] < n && (a == 0 || t.idx[a] > t.idx[a - 1]) &&
         (t.sign[a] == 1 || t.sign[a] == -1);
  }
  if (!ok) throw std::invalid_argument("TripleCursor: inconsistent state");
  c.pos_ = pos;
  c.cur_ = t;
  return c;
}

}  // namespace conecg
