#include "scmra/random.hpp"

#include <array>
#include <cmath>

namespace scmra {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::array<std::uint32_t, 4> words{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(seeded_engine(seed, stream_id)) {}

double RandomStream::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RandomStream::exponential(double mean) {
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
}

double RandomStream::standard_normal() { return normal_(engine_); }

std::complex<double> RandomStream::complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
}

Eigen::VectorXcd RandomStream::complex_normal_vector(Eigen::Index dim, double variance) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = complex_normal(variance);
    return v;
}

}  // namespace scmra
