#include "membrane/lp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "membrane/error.hpp"

namespace membrane::lp {

std::size_t Problem::add_row(Row row) {
  rows.push_back(std::move(row));
  return rows.size() - 1;
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

template <class S>
struct Num;

template <>
struct Num<double> {
  double eps;
  bool pos(double v) const { return v > eps; }
  bool neg(double v) const { return v < -eps; }
  bool nonzero(double v) const { return v != 0.0; }
};

template <>
struct Num<mpq_class> {
  bool pos(const mpq_class& v) const { return sgn(v) > 0; }
  bool neg(const mpq_class& v) const { return sgn(v) < 0; }
  bool nonzero(const mpq_class& v) const { return sgn(v) != 0; }
};

// Equality form A z = b, z >= 0, b >= 0 of a Problem.
struct Layout {
  std::vector<std::size_t> pos_col, neg_col;  // per variable
  std::vector<std::size_t> slack_col;         // per row, npos for equalities
  std::vector<int> sigma;                     // row sign flip
  std::size_t columns = 0;
};

Layout make_layout(const Problem& p) {
  Layout l;
  l.pos_col.resize(p.num_vars);
  l.neg_col.assign(p.num_vars, npos);
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    l.pos_col[j] = l.columns++;
    if (p.is_free(j)) l.neg_col[j] = l.columns++;
  }
  l.slack_col.assign(p.rows.size(), npos);
  l.sigma.assign(p.rows.size(), 1);
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    if (p.rows[r].kind == RowKind::GreaterEq) l.slack_col[r] = l.columns++;
    if (p.rows[r].rhs < 0.0) l.sigma[r] = -1;
  }
  return l;
}

template <class S>
struct Outcome {
  bool feasible = false;
  std::vector<S> x;  // original variables
  std::vector<S> y;  // original rows, when infeasible
  std::size_t pivots = 0;
};

template <class S>
class PhaseOne {
 public:
  PhaseOne(const Problem& p, const Layout& l, Num<S> num)
      : m_(p.rows.size()), n_(l.columns), width_(n_ + m_ + 1), num_(num), t_((m_ + 1) * width_, S(0)), basis_(m_) {
    for (std::size_t r = 0; r < m_; ++r) {
      const S sg(l.sigma[r]);
      for (const auto& [j, c] : p.rows[r].coeffs) {
        at(r, l.pos_col[j]) += sg * S(c);
        if (l.neg_col[j] != npos) at(r, l.neg_col[j]) -= sg * S(c);
      }
      if (l.slack_col[r] != npos) at(r, l.slack_col[r]) = -sg;
      at(r, n_ + r) = S(1);
      at(r, width_ - 1) = sg * S(p.rows[r].rhs);
      basis_[r] = n_ + r;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      S sum(0);
      for (std::size_t r = 0; r < m_; ++r) sum += at(r, j);
      at(m_, j) = -sum;
    }
    S w(0);
    for (std::size_t r = 0; r < m_; ++r) w += at(r, width_ - 1);
    at(m_, width_ - 1) = -w;
  }

  // Returns the number of pivots; throws on iteration blow-up.
  std::size_t run() {
    const std::size_t limit = 50 * (m_ + n_) + 1000;
    std::size_t pivots = 0, stall = 0;
    bool bland = false;
    S last = objective();
    while (true) {
      const std::size_t pc = entering(bland);
      if (pc == npos) return pivots;
      const std::size_t pr = leaving(pc);
      if (pr == npos) throw Error(ErrorCode::InternalInconsistency, "phase one is unbounded");
      pivot(pr, pc);
      if (++pivots > limit) throw Error(ErrorCode::InternalInconsistency, "simplex iteration limit reached");
      const S now = objective();
      if (now < last) {
        last = now;
        stall = 0;
      } else if (++stall > 50) {
        bland = true;
      }
    }
  }

  S objective() const { return -at(m_, width_ - 1); }
  S rhs_sum() const {
    S s(0);
    for (std::size_t r = 0; r < m_; ++r) s += abs_of(at(r, width_ - 1));
    return s;
  }

  std::vector<S> column_values() const {
    std::vector<S> z(n_ + m_, S(0));
    for (std::size_t r = 0; r < m_; ++r) z[basis_[r]] = at(r, width_ - 1);
    return z;
  }

  // Multipliers of the flipped rows: 1 - reduced cost of each artificial.
  std::vector<S> duals() const {
    std::vector<S> y(m_);
    for (std::size_t r = 0; r < m_; ++r) y[r] = S(1) - at(m_, n_ + r);
    return y;
  }

 private:
  S& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  const S& at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }

  static S abs_of(const S& v) {
    if constexpr (std::is_same_v<S, double>) {
      return std::abs(v);
    } else {
      return ::abs(v);
    }
  }

  std::size_t entering(bool bland) const {
    std::size_t best = npos;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!num_.neg(at(m_, j))) continue;
      if (bland) return j;
      if (best == npos || at(m_, j) < at(m_, best)) best = j;
    }
    return best;
  }

  std::size_t leaving(std::size_t pc) const {
    std::size_t best = npos;
    S best_ratio(0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (!num_.pos(at(r, pc))) continue;
      const S ratio = at(r, width_ - 1) / at(r, pc);
      if (best == npos || ratio < best_ratio || (!(best_ratio < ratio) && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const S inv = S(1) / at(pr, pc);
    S* prow = &t_[pr * width_];
    for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = S(1);
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < width_; ++c)
      if (num_.nonzero(prow[c])) nz.push_back(c);
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      S* row = &t_[r * width_];
      if (!num_.nonzero(row[pc])) continue;
      const S f = row[pc];
      for (std::size_t c : nz) row[c] -= f * prow[c];
      row[pc] = S(0);
    }
    basis_[pr] = pc;
  }

  std::size_t m_, n_, width_;
  Num<S> num_;
  std::vector<S> t_;
  std::vector<std::size_t> basis_;
};

template <class S>
Outcome<S> phase_one(const Problem& p, Num<S> num, double tol) {
  const Layout l = make_layout(p);
  Outcome<S> out;
  if (p.rows.empty()) {
    out.feasible = true;
    out.x.assign(p.num_vars, S(0));
    return out;
  }
  PhaseOne<S> solver(p, l, num);
  out.pivots = solver.run();
  const S w = solver.objective();
  bool feasible;
  if constexpr (std::is_same_v<S, double>) {
    feasible = w <= tol * (1.0 + solver.rhs_sum());
  } else {
    (void)tol;
    feasible = sgn(w) == 0;
  }
  if (feasible) {
    const auto z = solver.column_values();
    out.feasible = true;
    out.x.resize(p.num_vars);
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      out.x[j] = z[l.pos_col[j]];
      if (l.neg_col[j] != npos) out.x[j] -= z[l.neg_col[j]];
    }
  } else {
    auto y = solver.duals();
    for (std::size_t r = 0; r < y.size(); ++r)
      if (l.sigma[r] < 0) y[r] = -y[r];
    out.y = std::move(y);
  }
  return out;
}

Problem restrict_rows(const Problem& p, const std::vector<std::size_t>& rows) {
  Problem sub;
  sub.num_vars = p.num_vars;
  sub.free = p.free;
  for (std::size_t r : rows) sub.rows.push_back(p.rows[r]);
  return sub;
}

bool certificate_holds(const Problem& p, const std::vector<mpq_class>& y) {
  std::vector<mpq_class> col(p.num_vars, 0);
  mpq_class yb = 0;
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    if (sgn(y[r]) == 0) continue;
    if (p.rows[r].kind == RowKind::GreaterEq && sgn(y[r]) < 0) return false;
    for (const auto& [j, c] : p.rows[r].coeffs) col[j] += y[r] * mpq_class(c);
    yb += y[r] * mpq_class(p.rows[r].rhs);
  }
  if (sgn(yb) <= 0) return false;
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (p.is_free(j) ? sgn(col[j]) != 0 : sgn(col[j]) > 0) return false;
  }
  return true;
}

// Rows hold at x up to tol relative to their scale, evaluated exactly.
bool point_holds(const Problem& p, const std::vector<double>& x, double tol) {
  for (const Row& row : p.rows) {
    mpq_class v = 0;
    double scale = std::abs(row.rhs);
    for (const auto& [j, c] : row.coeffs) {
      v += mpq_class(c) * mpq_class(x[j]);
      scale += std::abs(c * x[j]);
    }
    v -= mpq_class(row.rhs);
    const mpq_class slack(tol * std::max(1.0, scale));
    if (row.kind == RowKind::GreaterEq ? v < -slack : abs(v) > slack) return false;
  }
  for (std::size_t j = 0; j < p.num_vars; ++j)
    if (!p.is_free(j) && x[j] < 0.0) return false;
  return true;
}

Certificate make_certificate(const std::vector<mpq_class>& y) {
  Certificate c;
  c.verified = true;
  for (std::size_t r = 0; r < y.size(); ++r) {
    c.y.push_back(y[r].get_d());
    c.exact.push_back(y[r].get_str());
    if (sgn(y[r]) != 0) c.support.push_back(r);
  }
  return c;
}

}  // namespace

double max_violation(const Problem& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (const Row& row : problem.rows) {
    double v = -row.rhs, scale = std::max(1.0, std::abs(row.rhs));
    for (const auto& [j, c] : row.coeffs) {
      v += c * x[j];
      scale = std::max(scale, std::abs(c * x[j]));
    }
    const double viol = row.kind == RowKind::GreaterEq ? std::max(0.0, -v) : std::abs(v);
    worst = std::max(worst, viol / scale);
  }
  for (std::size_t j = 0; j < problem.num_vars; ++j)
    if (!problem.is_free(j)) worst = std::max(worst, -x[j]);
  return worst;
}

bool check_certificate_exact(const Problem& problem, const std::vector<double>& y) {
  if (y.size() != problem.rows.size()) return false;
  std::vector<mpq_class> q(y.size());
  for (std::size_t r = 0; r < y.size(); ++r) q[r] = mpq_class(y[r]);
  return certificate_holds(problem, q);
}

bool check_certificate_exact(const Problem& problem, const std::vector<std::string>& y) {
  if (y.size() != problem.rows.size()) return false;
  std::vector<mpq_class> q(y.size());
  try {
    for (std::size_t r = 0; r < y.size(); ++r) {
      q[r] = mpq_class(y[r]);
      q[r].canonicalize();
    }
  } catch (const std::invalid_argument&) {
    return false;
  }
  return certificate_holds(problem, q);
}

Result solve(const Problem& problem, const Options& options) {
  for (const Row& row : problem.rows) {
    if (!std::isfinite(row.rhs)) throw Error(ErrorCode::InvalidArgument, "non-finite right-hand side");
    for (const auto& [j, c] : row.coeffs) {
      if (j >= problem.num_vars) throw Error(ErrorCode::InvalidArgument, "row refers to an unknown variable");
      if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    }
  }
  if (!problem.free.empty() && problem.free.size() != problem.num_vars)
    throw Error(ErrorCode::InvalidArgument, "free flags do not match the variable count");

  Result result;
  const auto approx = phase_one<double>(problem, Num<double>{1e-10}, options.tolerance);
  result.pivots = approx.pivots;

  auto exact_full = [&]() {
    const auto exact = phase_one<mpq_class>(problem, Num<mpq_class>{}, 0.0);
    result.pivots += exact.pivots;
    result.verified = true;
    if (exact.feasible) {
      result.feasible = true;
      result.x.clear();
      for (const mpq_class& v : exact.x) result.x.push_back(v.get_d());
      result.certificate.reset();
    } else {
      result.feasible = false;
      result.x.clear();
      result.certificate = make_certificate(exact.y);
    }
  };

  if (approx.feasible) {
    result.feasible = true;
    result.x = approx.x;
    if (!options.verify_exact) return result;
    if (point_holds(problem, result.x, options.tolerance)) {
      result.verified = true;
    } else if (problem.num_vars <= options.exact_var_limit) {
      exact_full();
    }
    return result;
  }

  // Normalize the approximate multipliers and read off their support.
  std::vector<double> y = approx.y;
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  Certificate cert;
  if (ymax > 0.0)
    for (double& v : y) v /= ymax;
  for (std::size_t r = 0; r < y.size(); ++r)
    if (std::abs(y[r]) > 1e-9) cert.support.push_back(r);
  cert.y = y;
  result.certificate = cert;
  if (!options.verify_exact) return result;

  if (!cert.support.empty()) {
    const Problem sub = restrict_rows(problem, cert.support);
    const auto exact = phase_one<mpq_class>(sub, Num<mpq_class>{}, 0.0);
    result.pivots += exact.pivots;
    if (!exact.feasible) {
      std::vector<mpq_class> full(problem.rows.size(), 0);
      for (std::size_t k = 0; k < cert.support.size(); ++k) full[cert.support[k]] = exact.y[k];
      if (certificate_holds(problem, full)) {
        result.certificate = make_certificate(full);
        result.verified = true;
        return result;
      }
    }
  }
  if (problem.num_vars <= options.exact_var_limit) exact_full();
  return result;
}

}  // namespace membrane::lp
