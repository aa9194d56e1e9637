#include "scmra/scm.hpp"

#include <complex>

#include "scmra/error.hpp"
#include "scmra/units.hpp"

namespace scmra {

ComplexVector scm_reflect(const ComplexVector& z, double phase, double g, const ComplexVector& eta) {
    if (z.size() != eta.size()) throw Error("scm_reflect: dimension mismatch");
    return (g * std::polar(1.0, phase)) * (z + eta).conjugate();
}

ComplexVector scm_reflect(const ComplexVector& z, double phase, const ScmParameters& params, RandomStream& rng) {
    if (z.size() != params.cells) throw Error("scm_reflect: dimension mismatch");
    const std::complex<double> rot = params.g * std::polar(1.0, phase);
    if (params.sigma_eta_sq <= 0.0) return rot * z.conjugate();
    return rot * (z + rng.complex_normal_vector(z.size(), params.sigma_eta_sq)).conjugate();
}

PhaseSequence bits_to_phases(const Bits& bits, int guard_length) {
    if (guard_length < 0) throw Error("bits_to_phases: guard_length must be >= 0");
    PhaseSequence out;
    out.guard_length = guard_length;
    out.phases.assign(static_cast<std::size_t>(guard_length), 0.0);
    out.phases.reserve(out.phases.size() + bits.size());
    for (auto b : bits) out.phases.push_back(b ? kPi : 0.0);
    return out;
}

}  // namespace scmra
