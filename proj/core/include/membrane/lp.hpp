#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace membrane::lp {

inline constexpr double kLpTolerance = 1e-9;

enum class RowKind { GreaterEq, Equal };

struct Row {
  std::vector<std::pair<std::size_t, double>> coeffs;  // sparse (variable, coefficient)
  RowKind kind = RowKind::GreaterEq;
  double rhs = 0.0;
};

/// Feasibility system: every row holds, and variables flagged `free` are
/// unrestricted while the rest are nonnegative.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<bool> free;  // empty means all nonnegative
  std::vector<Row> rows;

  bool is_free(std::size_t j) const { return !free.empty() && free[j]; }
  std::size_t add_row(Row row);
};

/// Farkas witness: y >= 0 on >= rows, y^T A <= 0 on nonnegative columns,
/// y^T A = 0 on free columns and y^T b > 0.
struct Certificate {
  std::vector<double> y;            // one multiplier per row
  std::vector<std::string> exact;   // rational multipliers "p/q" when verified
  std::vector<std::size_t> support; // rows with nonzero multiplier
  bool verified = false;            // checked in exact rational arithmetic
};

struct Result {
  bool feasible = false;
  std::vector<double> x;
  std::optional<Certificate> certificate;
  bool verified = false;  // feasible point or certificate checked exactly
  std::size_t pivots = 0;
};

struct Options {
  double tolerance = kLpTolerance;
  bool verify_exact = true;
  // Full rational re-solve is attempted only up to this many variables.
  std::size_t exact_var_limit = 50;
};

Result solve(const Problem& problem, const Options& options = {});

// Largest violation of the rows at x (0 when all hold), relative to row scale.
double max_violation(const Problem& problem, const std::vector<double>& x);

// Exact check of a Farkas certificate given as doubles; false when any
// condition fails in rational arithmetic.
bool check_certificate_exact(const Problem& problem, const std::vector<double>& y);
// Same check for rational multipliers written as "p/q".
bool check_certificate_exact(const Problem& problem, const std::vector<std::string>& y);

}  // namespace membrane::lp
