/**
 * @file parallel.hpp
 * @brief Element-loop execution: a serial reference path and an OpenMP path.
 *
 * Both paths run the same local kernel and emit triplets in element order,
 * so the assembled matrices are bitwise identical for any thread count.
 */
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace stokes_biot {

enum class ExecPolicy { Serial, Parallel };

/// Thread count for element loops, read once from SOLVER_THREADS (default 1).
int assembly_threads();
void set_assembly_threads(int threads);

using Triplets = std::vector<Eigen::Triplet<double>>;

/// Assemble cell-local dense blocks into a sparse matrix.
///
/// `kernel(cell, local)` fills `local` (row_local x col_local) for one cell;
/// `row_dofs(cell)` / `col_dofs(cell)` give the global indices.
template <class Kernel, class RowDofs, class ColDofs>
Eigen::SparseMatrix<double> assemble_cells(int num_cells, int rows, int cols, int row_local,
                                           int col_local, RowDofs&& row_dofs,
                                           ColDofs&& col_dofs, Kernel&& kernel,
                                           ExecPolicy policy) {
  const std::size_t block = static_cast<std::size_t>(row_local) * col_local;
  std::vector<double> buffer(block * static_cast<std::size_t>(num_cells));

  auto compute = [&](int cell) {
    Eigen::Map<Eigen::MatrixXd> local(buffer.data() + block * cell, row_local, col_local);
    local.setZero();
    kernel(cell, local);
  };

  if (policy == ExecPolicy::Parallel && assembly_threads() > 1) {
#pragma omp parallel for schedule(static) num_threads(assembly_threads())
    for (int cell = 0; cell < num_cells; ++cell) compute(cell);
  } else {
    for (int cell = 0; cell < num_cells; ++cell) compute(cell);
  }

  Triplets triplets;
  triplets.reserve(block * static_cast<std::size_t>(num_cells));
  for (int cell = 0; cell < num_cells; ++cell) {
    const std::span<const int> r = row_dofs(cell);
    const std::span<const int> c = col_dofs(cell);
    const double* local = buffer.data() + block * cell;
    for (int j = 0; j < col_local; ++j) {
      for (int i = 0; i < row_local; ++i) {
        const double v = local[static_cast<std::size_t>(j) * row_local + i];
        if (v != 0.0) triplets.emplace_back(r[i], c[j], v);
      }
    }
  }
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace stokes_biot
