#include "scmra/analytics.hpp"

#include <cmath>
#include <numeric>

#include "scmra/error.hpp"
#include "scmra/units.hpp"

namespace scmra {

std::vector<double> snr_recursion_step(const std::vector<double>& snr, const std::vector<double>& snr_max, int n) {
    if (snr.size() != snr_max.size() || snr.empty()) throw Error("snr_recursion_step: dimension mismatch");
    if (n < static_cast<int>(snr.size())) throw Error("snr_recursion_step: N must be >= rank");
    for (std::size_t j = 0; j < snr.size(); ++j)
        if (snr[j] < 0.0 || snr_max[j] < 0.0) throw Error("snr_recursion_step: negative SNR");
    const double denom = n + std::accumulate(snr.begin(), snr.end(), 0.0);
    std::vector<double> out(snr.size());
    for (std::size_t j = 0; j < snr.size(); ++j) out[j] = snr_max[j] * (snr[j] + 1.0) / denom;
    return out;
}

double rank1_fixed_point(double snr_max, int n) {
    if (!(snr_max > 0.0) || n < 1) throw Error("rank1_fixed_point: need S > 0 and N >= 1");
    // The closed form usually quoted for this root does not satisfy the
    // quadratic; this is the root derived from r = S (r + 1) / (N + r).
    const double b = snr_max - n;
    const double disc = std::sqrt(b * b + 4.0 * snr_max);
    // Stable form of (b + disc) / 2 when b < 0.
    return b >= 0.0 ? 0.5 * (b + disc) : 2.0 * snr_max / (disc - b);
}

double bootstrap_snr(double snr_max, int n) {
    if (n < 1) throw Error("bootstrap_snr: N must be >= 1");
    return snr_max / n;
}

double decision_snr(double p_tx, double p_scout, double snr_max_1) {
    if (!(p_tx > 0.0) || !(p_scout > 0.0) || !(snr_max_1 > 0.0)) throw Error("decision_snr: inputs must be positive");
    return p_tx / p_scout * snr_max_1;
}

double decision_snr_exact(double p_tx, double p_scout, const std::vector<double>& snr_at_detection,
                          const std::vector<double>& snr_max) {
    if (!(p_tx > 0.0) || !(p_scout > 0.0)) throw Error("decision_snr_exact: powers must be positive");
    if (snr_at_detection.size() != snr_max.size() || snr_max.empty())
        throw Error("decision_snr_exact: need one SNR per direction");
    double sum = 0.0;
    for (std::size_t j = 0; j < snr_max.size(); ++j) {
        if (!(snr_max[j] > 0.0) || snr_at_detection[j] < 0.0) throw Error("decision_snr_exact: bad SNR");
        sum += snr_at_detection[j] / std::sqrt(snr_max[j]);
    }
    return p_tx / p_scout * sum * sum;
}

double free_space_snr(double p, double g, int n, int m, double g_bs, double g_scm, double wavelength, double d,
                      double sigma_sq) {
    if (!(d > 0.0)) throw Error("free_space_snr: distance must be > 0");
    if (!(sigma_sq > 0.0)) throw Error("free_space_snr: noise variance must be > 0");
    const double amp = g * n * m * g_bs * g_scm * wavelength * wavelength / std::pow(4.0 * kPi * d, 2);
    return p * amp * amp / sigma_sq;
}

SnrTrajectory snr_trajectory(const std::vector<double>& snr_max, int n, const std::vector<double>& init, int horizon) {
    if (horizon < 0) throw Error("snr_trajectory: horizon must be >= 0");
    if (init.size() != snr_max.size()) throw Error("snr_trajectory: dimension mismatch");
    SnrTrajectory t;
    t.snr_max = snr_max;
    t.snr.reserve(static_cast<std::size_t>(horizon) + 1);
    t.snr.push_back(init);
    for (int k = 0; k < horizon; ++k) t.snr.push_back(snr_recursion_step(t.snr.back(), snr_max, n));
    return t;
}

int convergence_step(const SnrTrajectory& t, double target, double tol_db) {
    int first = -1;
    const double target_db = linear_to_db(target);
    for (std::size_t k = 0; k < t.snr.size(); ++k) {
        const double v = t.snr[k].at(0);
        const bool inside = v > 0.0 && std::abs(linear_to_db(v) - target_db) <= tol_db;
        if (inside && first < 0) first = static_cast<int>(k);
        if (!inside) first = -1;
    }
    return first;
}

}  // namespace scmra
