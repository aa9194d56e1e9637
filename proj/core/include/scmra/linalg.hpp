#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scmra/random.hpp"

namespace scmra {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Point3 = Eigen::Vector3d;

inline constexpr double kUnitNormTolerance = 1e-12;

/// Regular rows x cols grid in the xy plane, centred on `center`.
struct PlanarArrayGeometry {
    int rows = 1;
    int cols = 1;
    double spacing = 1.5e-3;  // m
    Point3 center = Point3::Zero();

    int element_count() const { return rows * cols; }
};

/// Validates geometry invariants (positive counts, positive spacing).
void validate(const PlanarArrayGeometry& geom);

/// Element positions, row-major (row index along y, column index along x).
std::vector<Point3> element_positions(const PlanarArrayGeometry& geom);

struct EigenDecomposition {
    RealVector eigenvalues;     // descending
    ComplexMatrix eigenvectors;  // column j pairs with eigenvalues[j]
};

bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

/// Dense Hermitian eigensolver. Test/oracle facility only; the protocol never calls it.
EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix& a);

/// Projects `candidate` onto the orthogonal complement of `basis` (two passes of
/// classical Gram-Schmidt) and normalizes it. Throws "candidate in span" when the
/// residual is below 1e-9 of the candidate norm.
ComplexVector gram_schmidt_extend(std::span<const ComplexVector> basis, const ComplexVector& candidate);

/// Isotropic unit vector in the orthogonal complement of `forbidden_basis`.
ComplexVector random_unit_vector(RandomStream& rng, Eigen::Index dim,
                                 std::span<const ComplexVector> forbidden_basis = {});

}  // namespace scmra
