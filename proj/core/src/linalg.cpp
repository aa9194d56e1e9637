#include "scmra/linalg.hpp"

#include <cmath>

#include "scmra/error.hpp"

namespace scmra {

void validate(const PlanarArrayGeometry& geom) {
    if (geom.rows < 1 || geom.cols < 1) throw Error("array geometry: rows and cols must be >= 1");
    if (!(geom.spacing > 0.0)) throw Error("array geometry: spacing must be > 0");
}

std::vector<Point3> element_positions(const PlanarArrayGeometry& geom) {
    validate(geom);
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(geom.element_count()));
    const double y0 = 0.5 * (geom.rows - 1);
    const double x0 = 0.5 * (geom.cols - 1);
    for (int r = 0; r < geom.rows; ++r) {
        for (int c = 0; c < geom.cols; ++c) {
            out.emplace_back(geom.center + Point3((c - x0) * geom.spacing, (r - y0) * geom.spacing, 0.0));
        }
    }
    return out;
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
    if (a.rows() != a.cols()) return false;
    const double norm = a.norm();
    if (norm == 0.0) return true;
    return (a - a.adjoint()).norm() / norm < rel_tol;
}

EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix& a) {
    if (!is_hermitian(a)) throw Error("not Hermitian");
    // Symmetrize away rounding before handing to the self-adjoint solver.
    const ComplexMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");

    const Eigen::Index n = a.rows();
    EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
    // Eigen returns ascending order.
    for (Eigen::Index j = 0; j < n; ++j) {
        out.eigenvalues[j] = solver.eigenvalues()[n - 1 - j];
        out.eigenvectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    return out;
}

ComplexVector gram_schmidt_extend(std::span<const ComplexVector> basis, const ComplexVector& candidate) {
    const double input_norm = candidate.norm();
    if (input_norm == 0.0) throw Error("candidate in span");
    ComplexVector v = candidate;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
            if (b.size() != v.size()) throw Error("gram_schmidt_extend: dimension mismatch");
            v -= b * b.dot(v);
        }
    }
    const double residual = v.norm();
    if (residual < 1e-9 * input_norm) throw Error("candidate in span");
    return v / residual;
}

ComplexVector random_unit_vector(RandomStream& rng, Eigen::Index dim,
                                 std::span<const ComplexVector> forbidden_basis) {
    if (dim <= static_cast<Eigen::Index>(forbidden_basis.size())) throw Error("null space empty");
    constexpr int kMaxDraws = 64;
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        try {
            return gram_schmidt_extend(forbidden_basis, rng.complex_normal_vector(dim));
        } catch (const Error&) {
            // Redraw; probability of landing in the span is zero in exact arithmetic.
        }
    }
    throw Error("null space empty");
}

}  // namespace scmra
