#pragma once

#include "scmra/linalg.hpp"
#include "scmra/random.hpp"

namespace scmra {

/// Dense M x N channel (SCM cells x BS elements).
struct ChannelMatrix {
    ComplexMatrix h;

    Eigen::Index cells() const { return h.rows(); }
    Eigen::Index bs_elements() const { return h.cols(); }
};

/// A = g H^H H, the BS-to-BS matrix seen through a conjugating reflector.
struct RoundTripChannel {
    ComplexMatrix a;
    double g = 1.0;
};

/// Thermal noise variances, all in watts.
struct NoiseModel {
    double sigma_eta_sq = 0.0;  // SCM cell noise
    double sigma_w_sq = 0.0;    // BS receiver noise
    double sigma_sq = 0.0;      // isotropic decision noise, normally sigma_w_sq
};

void validate(const NoiseModel& noise);

/// kT0 F W with T0 = 290 K.
double noise_variance(double noise_figure_db, double bandwidth_hz);

NoiseModel make_noise_model(double scm_noise_figure_db, double bs_noise_figure_db, double bandwidth_hz);

/// Spherical-wave Friis model per element pair:
/// h_mn = sqrt(G_bs G_scm) * lambda / (4 pi d_mn) * exp(-j 2 pi d_mn / lambda).
ChannelMatrix los_channel(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue, double wavelength,
                          double element_gain_bs = 1.0, double element_gain_scm = 1.0);

struct ClusteredNlosParams {
    int cluster_count = 5;
    double delay_spread = 9e-9;     // s
    double pathloss_exponent = 2.5;
    double element_gain_bs = 1.0;
    double element_gain_scm = 1.0;
};

/// Factored channel H ~= left * right^H, left: M x r, right: N x r.
/// The simulator only ever applies H and H^T, so it works on the factors.
struct FactoredChannel {
    ComplexMatrix left;
    ComplexMatrix right;

    Eigen::Index cells() const { return left.rows(); }
    Eigen::Index bs_elements() const { return right.rows(); }
    Eigen::Index rank() const { return left.cols(); }

    /// H x
    ComplexVector apply(const ComplexVector& x) const { return left * (right.adjoint() * x); }
    /// H^T r
    ComplexVector apply_transpose(const ComplexVector& r) const {
        return right.conjugate() * (left.transpose() * r);
    }
    ChannelMatrix dense() const { return {left * right.adjoint()}; }
};

/// Clustered geometric surrogate for a multipath NLOS channel ("clustered-nlos").
/// Narrowband: delays only shape cluster powers (exponential profile) and phases.
/// Mean Frobenius power equals the free-space value at the array-centre distance
/// rescaled by (d / 1 m)^(2 - beta).
FactoredChannel nlos_multipath_factored(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue,
                                        double wavelength, const ClusteredNlosParams& params,
                                        RandomStream& rng);

ChannelMatrix nlos_multipath_channel(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue,
                                     double wavelength, const ClusteredNlosParams& params, RandomStream& rng);

/// Target E[||H||_F^2] used by the clustered model.
double nlos_mean_power(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue, double wavelength,
                       const ClusteredNlosParams& params);

/// A = V diag(eigenvalues) V^H with V a seeded random orthonormal set.
RoundTripChannel synthetic_rank_channel(Eigen::Index n, std::span<const double> eigenvalues, RandomStream& rng,
                                        double g = 1.0);

/// A channel H (r x N) realising the round-trip A = g H^H H exactly for a given
/// orthonormal set of directions and eigenvalues.
FactoredChannel channel_from_eigenpairs(const ComplexMatrix& directions, std::span<const double> eigenvalues,
                                        double g);

RoundTripChannel modified_round_trip(const ChannelMatrix& h, double g);

/// Low-rank factorization of a dense channel with relative Frobenius error below `rel_tol`
/// (randomized range finder with a fixed internal seed, so the result is deterministic).
FactoredChannel factorize(const ChannelMatrix& h, double rel_tol = 1e-9);

}  // namespace scmra
