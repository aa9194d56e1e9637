#include "scmra/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "scmra/error.hpp"
#include "scmra/units.hpp"

namespace scmra {

namespace {

// Delay scaling factor of the exponential power-delay profile (r_tau in the
// 3GPP cluster generation procedure).
constexpr double kDelayScaling = 2.3;

ComplexVector planar_steering(const std::vector<Point3>& positions, const Point3& center, double wavelength,
                              double ux, double uy) {
    const double k0 = 2.0 * kPi / wavelength;
    ComplexVector a(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const Point3 rel = positions[i] - center;
        a[static_cast<Eigen::Index>(i)] = std::polar(1.0, k0 * (rel.x() * ux + rel.y() * uy));
    }
    return a;
}

// Uniform direction on the unit hemisphere; only the in-plane components matter
// for arrays lying in the xy plane.
std::pair<double, double> hemisphere_direction(RandomStream& rng) {
    const double cos_theta = rng.uniform(0.0, 1.0);
    const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    return {sin_theta * std::cos(phi), sin_theta * std::sin(phi)};
}

}  // namespace

void validate(const NoiseModel& noise) {
    if (!(noise.sigma_eta_sq > 0.0) || !(noise.sigma_w_sq > 0.0) || !(noise.sigma_sq > 0.0)) {
        throw Error("noise model: all variances must be > 0");
    }
}

double noise_variance(double noise_figure_db, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw Error("invalid bandwidth");
    return kBoltzmann * kReferenceTemperature * db_to_linear(noise_figure_db) * bandwidth_hz;
}

NoiseModel make_noise_model(double scm_noise_figure_db, double bs_noise_figure_db, double bandwidth_hz) {
    NoiseModel n;
    n.sigma_eta_sq = noise_variance(scm_noise_figure_db, bandwidth_hz);
    n.sigma_w_sq = noise_variance(bs_noise_figure_db, bandwidth_hz);
    n.sigma_sq = n.sigma_w_sq;
    return n;
}

ChannelMatrix los_channel(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue, double wavelength,
                          double element_gain_bs, double element_gain_scm) {
    if (!(wavelength > 0.0)) throw Error("los_channel: wavelength must be > 0");
    const auto bs_pos = element_positions(bs);
    const auto ue_pos = element_positions(ue);
    const double amp0 = std::sqrt(element_gain_bs * element_gain_scm) * wavelength / (4.0 * kPi);

    ChannelMatrix out{ComplexMatrix(static_cast<Eigen::Index>(ue_pos.size()),
                                    static_cast<Eigen::Index>(bs_pos.size()))};
    for (Eigen::Index n = 0; n < out.h.cols(); ++n) {
        const Point3& pn = bs_pos[static_cast<std::size_t>(n)];
        for (Eigen::Index m = 0; m < out.h.rows(); ++m) {
            const double d = (ue_pos[static_cast<std::size_t>(m)] - pn).norm();
            if (d == 0.0) throw Error("co-located elements");
            // Reduce the phase in cycles: d / lambda is ~1e4 at 10 m.
            const double cycles = d / wavelength;
            out.h(m, n) = std::polar(amp0 / d, -2.0 * kPi * (cycles - std::floor(cycles)));
        }
    }
    return out;
}

double nlos_mean_power(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue, double wavelength,
                       const ClusteredNlosParams& params) {
    const double d = (ue.center - bs.center).norm();
    if (!(d > 0.0)) throw Error("co-located elements");
    const double friis = wavelength / (4.0 * kPi * d);
    return params.element_gain_bs * params.element_gain_scm * friis * friis *
           std::pow(d, 2.0 - params.pathloss_exponent) * bs.element_count() * ue.element_count();
}

FactoredChannel nlos_multipath_factored(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue,
                                        double wavelength, const ClusteredNlosParams& params,
                                        RandomStream& rng) {
    if (params.cluster_count < 1) throw Error("nlos_multipath_channel: cluster_count must be >= 1");
    if (!(params.delay_spread > 0.0)) throw Error("nlos_multipath_channel: delay_spread must be > 0");
    const auto bs_pos = element_positions(bs);
    const auto ue_pos = element_positions(ue);
    const double total_power = nlos_mean_power(bs, ue, wavelength, params);
    const double per_link = total_power / static_cast<double>(bs.element_count() * ue.element_count());
    const double carrier = kSpeedOfLight / wavelength;

    const int c_count = params.cluster_count;
    std::vector<double> delays(static_cast<std::size_t>(c_count));
    for (auto& tau : delays) tau = -kDelayScaling * params.delay_spread * std::log(rng.uniform(1e-300, 1.0));
    const double tau_min = *std::min_element(delays.begin(), delays.end());
    std::vector<double> powers(delays.size());
    double power_sum = 0.0;
    for (std::size_t c = 0; c < delays.size(); ++c) {
        delays[c] -= tau_min;
        powers[c] = std::exp(-delays[c] * (kDelayScaling - 1.0) / (kDelayScaling * params.delay_spread));
        power_sum += powers[c];
    }

    FactoredChannel out{ComplexMatrix(ue.element_count(), c_count), ComplexMatrix(bs.element_count(), c_count)};
    for (int c = 0; c < c_count; ++c) {
        const auto [bx, by] = hemisphere_direction(rng);
        const auto [sx, sy] = hemisphere_direction(rng);
        const double p = powers[static_cast<std::size_t>(c)] / power_sum * per_link;
        const std::complex<double> alpha =
            rng.complex_normal(p) * std::polar(1.0, -2.0 * kPi * std::fmod(carrier * delays[static_cast<std::size_t>(c)], 1.0));
        out.left.col(c) = alpha * planar_steering(ue_pos, ue.center, wavelength, sx, sy);
        out.right.col(c) = planar_steering(bs_pos, bs.center, wavelength, bx, by);
    }
    return out;
}

ChannelMatrix nlos_multipath_channel(const PlanarArrayGeometry& bs, const PlanarArrayGeometry& ue,
                                     double wavelength, const ClusteredNlosParams& params, RandomStream& rng) {
    return nlos_multipath_factored(bs, ue, wavelength, params, rng).dense();
}

RoundTripChannel synthetic_rank_channel(Eigen::Index n, std::span<const double> eigenvalues, RandomStream& rng,
                                        double g) {
    if (static_cast<Eigen::Index>(eigenvalues.size()) > n) throw Error("synthetic_rank_channel: more eigenvalues than dimensions");
    for (double lambda : eigenvalues) {
        if (lambda < 0.0) throw Error("PSD violated");
    }
    std::vector<ComplexVector> basis;
    RoundTripChannel out{ComplexMatrix::Zero(n, n), g};
    for (double lambda : eigenvalues) {
        basis.push_back(random_unit_vector(rng, n, basis));
        out.a += lambda * basis.back() * basis.back().adjoint();
    }
    if (out.a.norm() == 0.0) throw Error("synthetic_rank_channel: zero channel");
    return out;
}

FactoredChannel channel_from_eigenpairs(const ComplexMatrix& directions, std::span<const double> eigenvalues,
                                        double g) {
    if (directions.cols() != static_cast<Eigen::Index>(eigenvalues.size())) {
        throw Error("channel_from_eigenpairs: direction/eigenvalue count mismatch");
    }
    if (!(g > 0.0)) throw Error("channel_from_eigenpairs: g must be > 0");
    const auto r = directions.cols();
    // H = diag(sqrt(lambda / g)) V^H  (r x N)  =>  g H^H H = V diag(lambda) V^H.
    FactoredChannel out{ComplexMatrix::Zero(r, r), directions};
    for (Eigen::Index i = 0; i < r; ++i) {
        if (eigenvalues[static_cast<std::size_t>(i)] < 0.0) throw Error("PSD violated");
        out.left(i, i) = std::sqrt(eigenvalues[static_cast<std::size_t>(i)] / g);
    }
    return out;
}

RoundTripChannel modified_round_trip(const ChannelMatrix& h, double g) {
    if (!(g > 0.0)) throw Error("modified_round_trip: g must be > 0");
    RoundTripChannel out{g * (h.h.adjoint() * h.h), g};
    // Exact Hermitian symmetry (the product is Hermitian up to rounding).
    out.a = 0.5 * (out.a + out.a.adjoint()).eval();
    return out;
}

FactoredChannel factorize(const ChannelMatrix& h, double rel_tol) {
    const Eigen::Index m = h.h.rows();
    const Eigen::Index n = h.h.cols();
    const double norm = h.h.norm();
    if (!(norm > 0.0) || !h.h.allFinite()) throw Error("factorize: channel must be finite and non-zero");
    if (!(rel_tol > 0.0)) throw Error("factorize: tolerance must be > 0");

    // Adaptive randomized range finder. Each new sketch block, projected off the
    // current basis, is a set of Gaussian probes of the residual H - Q Q^H H:
    // E||(I - QQ^H) H w||^2 = ||H - QQ^H H||_F^2. A factor 10 margin on the
    // probe estimate makes an early stop with a larger residual very unlikely.
    const Eigen::Index full = std::min(m, n);
    constexpr Eigen::Index kBlock = 16;
    constexpr double kMargin = 10.0;
    RandomStream sketch_rng(0x5eedf00dULL, 0);
    ComplexMatrix q(m, 0);
    ComplexMatrix b(0, n);
    while (q.cols() + kBlock < full) {
        ComplexMatrix omega(n, kBlock);
        for (Eigen::Index j = 0; j < kBlock; ++j) omega.col(j) = sketch_rng.complex_normal_vector(n);
        ComplexMatrix y = h.h * omega;
        for (int pass = 0; pass < 2; ++pass) y -= q * (q.adjoint() * y);
        if (q.cols() > 0) {
            const double estimate = kMargin * std::sqrt(y.squaredNorm() / kBlock);
            if (estimate <= rel_tol * norm) return {q, b.adjoint()};
        }
        Eigen::HouseholderQR<ComplexMatrix> qr(y);
        const ComplexMatrix q_new = qr.householderQ() * ComplexMatrix::Identity(m, kBlock);
        const ComplexMatrix b_new = q_new.adjoint() * h.h;

        ComplexMatrix q_cat(m, q.cols() + kBlock);
        q_cat << q, q_new;
        ComplexMatrix b_cat(b.rows() + kBlock, n);
        b_cat << b, b_new;
        q.swap(q_cat);
        b.swap(b_cat);
    }
    if (m <= n) return {ComplexMatrix::Identity(m, m), h.h.adjoint()};
    return {h.h, ComplexMatrix::Identity(n, n)};
}

}  // namespace scmra
