#pragma once

// Linear algebra on SL(d,R): determinant normalization, Cartan and Jordan
// projections, exterior powers and (r, eps)-proximality.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jspec/error.hpp"

namespace jspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxDim = 6;

/// An element of SL(d,R) (or of its image in PGL when det = -1).
///
/// Stored entries always have |det| = 1.  log_scale is d * log(c) for the
/// positive scalar c that was factored out of the raw input, so the raw matrix
/// equals exp(log_scale / d) * entries().
class UnimodularMatrix {
public:
    /// Identity of dimension d.
    explicit UnimodularMatrix(int d = 2);

    /// normalize_det: accepts any invertible finite matrix.
    /// Throws SingularInput for |det| < 1e-300 or non-finite entries.
    static UnimodularMatrix normalize(const Matrix& m);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const noexcept { return entries_; }
    double log_scale() const noexcept { return log_scale_; }
    bool orientation_reversing() const noexcept { return negative_det_; }

    UnimodularMatrix inverse() const;
    UnimodularMatrix operator*(const UnimodularMatrix& rhs) const;

private:
    UnimodularMatrix(Matrix entries, double log_scale, bool negative_det);

    Matrix entries_;
    double log_scale_ = 0.0;
    bool negative_det_ = false;
};

/// A point of the closed Weyl chamber: coordinates sum to zero and are
/// weakly decreasing.
class ChamberVector {
public:
    ChamberVector() = default;

    /// Throws InvalidArgument when the chamber invariants fail beyond
    /// rounding (sum 1e-9, ordering 1e-12).
    explicit ChamberVector(std::vector<double> coords);

    /// Sorts decreasingly and removes the mean; for data that is only
    /// approximately chamber-valued (Monte Carlo averages, midpoints).
    static ChamberVector project(std::vector<double> coords);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const noexcept { return coords_; }
    std::span<const double> span() const noexcept { return coords_; }

private:
    std::vector<double> coords_;
};

/// Points in the trace-zero hyperplane that need not be ordered (differences
/// of chamber vectors, dual vectors, cell centres).
using PlaneVector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

ChamberVector cartan_projection(const UnimodularMatrix& g);
ChamberVector jordan_projection(const UnimodularMatrix& g);

/// k-th compound matrix: entry (I, J) is the minor on rows I and columns J,
/// index sets in lexicographic order.  Throws BadIndex unless 1 <= k <= d.
Matrix exterior_power(const Matrix& m, int k);
Matrix exterior_power(const UnimodularMatrix& g, int k);

/// Lexicographically ordered k-subsets of {0, ..., d-1}.
std::vector<std::vector<int>> index_subsets(int d, int k);

/// Singular values (descending) and eigenvalue moduli (descending).
Vector singular_values(const Matrix& m);
Vector eigenvalue_moduli(const Matrix& m);

/// Relative gap below which the top eigenvalue is not considered unique.
inline constexpr double kEigenGapTolerance = 1e-8;

struct RepresentationProximality {
    int k = 1;
    double sv_ratio = 1.0;           // sigma_2 / sigma_1 of the compound
    double eigen_gap = 1.0;          // |mu_2| / |mu_1| of the compound
    double top_evec_distance = 0.0;  // sine of angle to the complementary invariant hyperplane
    bool degenerate_spectrum = true; // top modulus not isolated
    bool eps_proximal = false;
    bool r_eps_proximal = false;
};

struct ProximalityReport {
    std::vector<RepresentationProximality> per_rep; // k = 1 .. d-1
    bool loxodromic = false;
};

/// Proximality data of one linear map (already in the representation).
RepresentationProximality representation_proximality(const Matrix& m, int k, double r, double eps);

/// Throws InvalidArgument unless eps > 0 and 0 < r <= 1.
ProximalityReport proximality_report(const UnimodularMatrix& g, double r, double eps);

/// Assembles a report from precomputed compounds (index k-1 holds the k-th).
ProximalityReport proximality_report(std::span<const Matrix> compounds, double r, double eps);

} // namespace jspec
