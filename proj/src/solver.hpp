#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparse.hpp"

namespace vesicle {

struct SolverConfig {
  double tol = 1e-10;  // relative residual ||Ax-b|| / ||b||
};

struct SolveReport {
  bool converged = false;
  double rel_residual = 0.0;
  int iterations = 0;  // 0 for the direct backend
  double seconds = 0.0;
  std::string message;
};

// Direct sparse LU with partial pivoting (UMFPACK backend). The symbolic
// analysis is cached and reused while the sparsity pattern is unchanged;
// numeric factorization happens on every factorize() call.
class LuSolver {
 public:
  explicit LuSolver(SolverConfig cfg = {});
  ~LuSolver();
  LuSolver(LuSolver&&) noexcept;
  LuSolver& operator=(LuSolver&&) noexcept;
  LuSolver(const LuSolver&) = delete;
  LuSolver& operator=(const LuSolver&) = delete;

  // Factorizes A. Returns a report with converged=false (and a message) on
  // singular or otherwise failed factorization instead of throwing.
  SolveReport factorize(const SparseMatrix& A);

  // Solves with the last successful factorization; fills report with the
  // relative residual of this right-hand side.
  std::vector<double> solve(std::span<const double> rhs, SolveReport* report = nullptr) const;

  const SolverConfig& config() const { return cfg_; }

 private:
  struct Impl;
  SolverConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// One-shot contract: factorize + solve + residual check.
std::pair<std::vector<double>, SolveReport> solve(const SparseMatrix& A, std::span<const double> b,
                                                  SolverConfig cfg = {});

}  // namespace vesicle
