#pragma once

#include <vector>

namespace scmra {

/// SNR_j[k] = S_j (SNR_j[k-1] + 1) / (N + sum_i SNR_i[k-1]), all linear.
std::vector<double> snr_recursion_step(const std::vector<double>& snr, const std::vector<double>& snr_max, int n);

/// Positive root of r^2 + (N - S) r - S = 0, the rank-1 fixed point of the recursion.
double rank1_fixed_point(double snr_max, int n);

/// S / N: the SNR of a random initial beam.
double bootstrap_snr(double snr_max, int n);

/// (P_tx / P_scout) S: SNR of a task at the detection threshold check.
double decision_snr(double p_tx, double p_scout, double snr_max_1);

/// (P_tx / P_scout) (sum_j SNR_j / sqrt(S_j))^2, from the per-direction SNRs at detection.
/// Equals P_tx (sum_j lambda_j |x_j|^2)^2 / sigma^2 when SNR_j = P_scout lambda_j^2 |x_j|^2 / sigma^2.
double decision_snr_exact(double p_tx, double p_scout, const std::vector<double>& snr_at_detection,
                          const std::vector<double>& snr_max);

/// Free-space rank-1 link budget,
/// P g^2 N^2 M^2 G_bs^2 G_scm^2 lambda^4 / (sigma^2 (4 pi d)^4).
double free_space_snr(double p, double g, int n, int m, double g_bs, double g_scm, double wavelength, double d,
                      double sigma_sq);

struct SnrTrajectory {
    std::vector<double> snr_max;
    // snr[k][j]; snr[0] is the initial state.
    std::vector<std::vector<double>> snr;

    std::size_t steps() const { return snr.empty() ? 0 : snr.size() - 1; }
    std::size_t rank() const { return snr_max.size(); }
};

/// Iterates the recursion `horizon` times from `init`.
SnrTrajectory snr_trajectory(const std::vector<double>& snr_max, int n, const std::vector<double>& init, int horizon);

/// First step index at which direction 0 is within `tol_db` of `target` and stays there; -1 if never.
int convergence_step(const SnrTrajectory& t, double target, double tol_db = 0.1);

}  // namespace scmra
