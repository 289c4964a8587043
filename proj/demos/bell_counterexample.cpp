// The singlet's mutual information matrix is not positive semidefinite:
// I(A1A2) = 2 exceeds both marginal entropies.

#include <iostream>

#include "qmim/qmim.hpp"

int main() {
  const qmim::DensityMatrix singlet = qmim::named_state("singlet", 2);
  const qmim::MutualInfoMatrix m = qmim::build_mim(singlet);
  std::cout << "M2 =\n" << m.entries() << "\n\n";

  const qmim::CongruenceResult c = qmim::congruent_diagonalize(m);
  std::cout << "C =\n" << c.transform << "\n";
  std::cout << "C M C^T =\n" << c.transform * m.entries() * c.transform.transpose() << "\n\n";

  std::cout << "eigenvalue test: " << (qmim::psd_by_eigen(m).is_psd ? "PSD" : "not PSD") << '\n';
  std::cout << "theorem test:    " << (qmim::psd_by_theorem(m).is_psd ? "PSD" : "not PSD") << '\n';
}
