#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace scmra {

/// Seeded random stream. Every consumer (arrivals, channels, noise, protocol)
/// owns its own stream so that adding draws in one place never perturbs another.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    double uniform(double lo, double hi);
    double exponential(double mean);
    double standard_normal();

    /// CN(0, variance): real and imaginary parts each N(0, variance / 2).
    std::complex<double> complex_normal(double variance = 1.0);
    Eigen::VectorXcd complex_normal_vector(Eigen::Index dim, double variance = 1.0);

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace scmra
