#pragma once

#include <cstdint>
#include <vector>

#include "scmra/linalg.hpp"
#include "scmra/random.hpp"

namespace scmra {

struct ScmParameters {
    double g = 100.0;           // linear gain on the reflected field
    double sigma_eta_sq = 0.0;  // cell noise variance [W]; 0 disables noise injection
    Eigen::Index cells = 1;
};

using Bits = std::vector<std::uint8_t>;

/// One phase per symbol interval; the first `guard_length` entries are zero.
struct PhaseSequence {
    std::vector<double> phases;
    int guard_length = 0;

    std::size_t size() const { return phases.size(); }
};

/// r = g e^{j phase} (z + eta)^*, eta ~ CN(0, sigma_eta^2 I_M).
ComplexVector scm_reflect(const ComplexVector& z, double phase, const ScmParameters& params, RandomStream& rng);

/// Same as scm_reflect with an externally supplied noise realisation.
ComplexVector scm_reflect(const ComplexVector& z, double phase, double g, const ComplexVector& eta);

/// BPSK: guard zeros followed by bit b -> b * pi.
PhaseSequence bits_to_phases(const Bits& bits, int guard_length);

}  // namespace scmra
