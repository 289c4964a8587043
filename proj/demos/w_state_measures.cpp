// Correlation measures of the n-qubit W state for n = 3..8.

#include <cstdio>

#include "qmim/qmim.hpp"

int main() {
  std::printf("%3s %10s %10s %10s %10s %6s\n", "n", "S(A_i)", "I(A_iA_j)", "I'_G", "I_G", "PSD");
  for (std::size_t n = 3; n <= 8; ++n) {
    const qmim::MutualInfoMatrix m = qmim::build_mim(qmim::named_state("w", n));
    const qmim::CorrelationReport r = qmim::correlation_report(m);
    std::printf("%3zu %10.6f %10.6f %10.6f %10.6f %6s\n", n, m(0, 0), m(0, 1), r.i_prime_g.value, r.i_g,
                qmim::structural_verdict(m).is_psd ? "yes" : "no");
  }
}
