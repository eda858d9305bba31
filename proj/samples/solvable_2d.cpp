// Two-dimensional solvable example: [e1, e2] = e2, v = 0.5 e1, m = 2.
// Prints S and E at y = e1 + e2, using the library directly.
#include <iostream>

#include "finslerlab/finslerlab.hpp"
#include "finslerlab/report.hpp"

int main() {
  using namespace finslerlab;

  const BracketEntry entries[] = {{0, 1, 1, 1.0}};
  const auto spec = HomogeneousSpec::from_entries(2, Matrix::identity(2), entries, {0.5, 0.0});
  const auto model = PhiModel::kropina(2.0);
  const TangentVector y{1.0, 1.0};

  std::cout << "S (generic)      = " << fmt9(s_curvature_generic(spec, model, y)) << "\n"
            << "S (closed form)  = " << fmt9(s_curvature_kropina(spec, 2.0, y)) << "\n";

  const auto oracle = mean_berwald_oracle(spec, model, y);
  std::cout << "E (Hessian oracle):\n" << text_matrix(oracle.E);

  const auto closed = mean_berwald_closed(spec, 2.0, y);
  std::cout << "E (printed closed form), residual " << fmt9(*closed.residual_vs_oracle) << ":\n"
            << text_matrix(closed.E);
}
