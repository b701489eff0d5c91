// K = L = 3, T = 2 over F_29: the 18-server example, end to end.

#include <iostream>
#include <vector>

#include "gasp/gasp.hpp"

int main() {
  const gasp::SchemeParams params{3, 3, 2};
  const gasp::PolynomialCode code = gasp::gasp_auto(params);

  const gasp::DegreeTable table = gasp::outer_sum(code.assignment, params);
  std::cout << "degree table (" << code.label() << "):\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) std::cout << (j ? "\t" : "") << table(i, j);
    std::cout << '\n';
  }
  std::cout << "N=" << code.n_servers << "\n\n";

  // Points 1..18 work over F_29; the search is not needed here.
  std::vector<gasp::Residue> points;
  for (gasp::Residue a = 1; a <= 18; ++a) points.push_back(a);

  gasp::SessionOptions opts;
  opts.modulus = 29;
  opts.points = points;
  const auto tr = gasp::run_sdmm(params, gasp::SchemeKind::automatic, {6, 4, 6}, opts);
  std::cout << gasp::transcript_summary(tr);
  std::cout << "AB verified\n";
}
