#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "scmra/channel.hpp"
#include "scmra/protocol.hpp"
#include "scmra/random.hpp"
#include "scmra/scm.hpp"
#include "scmra/sim_config.hpp"
#include "scmra/traffic.hpp"

namespace scmra::fixture {

// Random N x r matrix with orthonormal columns (QR of a complex Gaussian draw).
inline ComplexMatrix random_orthonormal(Eigen::Index n, Eigen::Index r, RandomStream& rng) {
    ComplexMatrix g(n, r);
    for (Eigen::Index j = 0; j < r; ++j) g.col(j) = rng.complex_normal_vector(n);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    return qr.householderQ() * ComplexMatrix::Identity(n, r);
}

struct ScoutingRun {
    std::vector<double> gamma;           // gamma[k-1] is the SNR measured at step k
    std::vector<ComplexVector> beams;    // x0 after each step
};

// Scouting Task alone against one SCM, through the physical path
// y = H^T g e^{j0} (H x + eta)^* + w, with an empty Shared Database.
inline ScoutingRun scouting_loop(const FactoredChannel& h, double g, double p_scout, double sigma_eta_sq,
                                 double sigma_w_sq, double sigma_sq, int steps, RandomStream& rng) {
    const Eigen::Index n = h.bs_elements();
    SharedDatabase db(n);
    ScoutingState state;
    state.x0 = random_unit_vector(rng, n);
    ScmParameters scm{g, sigma_eta_sq, h.cells()};

    ScoutingRun run;
    for (int k = 0; k < steps; ++k) {
        const ComplexVector x = std::sqrt(p_scout) * state.x0;
        ComplexVector y = h.apply_transpose(scm_reflect(h.apply(x), 0.0, scm, rng));
        if (sigma_w_sq > 0.0) y += rng.complex_normal_vector(n, sigma_w_sq);
        auto upd = scouting_update(state, y, db, sigma_sq);
        state = upd.state;
        run.gamma.push_back(upd.gamma);
        run.beams.push_back(state.x0);
    }
    return run;
}

// Noiseless world whose UEs sit on mutually orthogonal rank-1 subspaces.
// UE u uses direction u mod N of a random unitary basis and arrives every
// `spacing` symbols, so each is detected alone.
struct OrthogonalFixture {
    SimConfig cfg;
    ComplexMatrix directions;
    std::vector<double> lambdas;  // eigenvalue of A_u per UE
    std::vector<PacketDescriptor> packets;
};

inline OrthogonalFixture make_orthogonal_fixture(int n_side, int ue_count, std::int64_t spacing,
                                                 double snr_max_db, std::uint64_t seed) {
    OrthogonalFixture f;
    f.cfg.bs_rows = n_side;
    f.cfg.bs_cols = n_side;
    f.cfg.noise_enabled = false;
    const auto n = static_cast<Eigen::Index>(n_side) * n_side;

    RandomStream rng(seed, 99);
    f.directions = random_orthonormal(n, n, rng);
    const double g = f.cfg.g_amplitude();
    const double sigma_sq = f.cfg.noise().sigma_sq;
    const double p_scout = f.cfg.p_scout_w();

    for (int u = 0; u < ue_count; ++u) {
        // Spread the SNRs a little so equal-gain coincidences cannot hide bugs;
        // every UE stays above the 30 dB detection level.
        const double snr_db = snr_max_db - 1.5 * (u % 3);
        const double lambda = std::sqrt(std::pow(10.0, snr_db / 10.0) * sigma_sq / p_scout);
        const ComplexMatrix v = f.directions.col(u % n);
        const double eig[] = {lambda};

        PacketDescriptor p;
        p.ue_id = u;
        p.arrival_symbol = 1 + u * spacing;
        p.bits.resize(static_cast<std::size_t>(f.cfg.payload_bits()));
        for (auto& b : p.bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
        p.phases = bits_to_phases(p.bits, f.cfg.guard_symbols);
        p.channel = channel_from_eigenpairs(v, eig, g);
        f.lambdas.push_back(lambda);
        f.packets.push_back(std::move(p));
    }
    return f;
}

}  // namespace scmra::fixture
