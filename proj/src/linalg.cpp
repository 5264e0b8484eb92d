#include "jspec/linalg.hpp"

#include "jspec/product.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <string>

namespace jspec {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DirsetMismatch: return "DirsetMismatch";
    case ErrorKind::DegenerateBody: return "DegenerateBody";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// UnimodularMatrix

UnimodularMatrix::UnimodularMatrix(int d)
    : entries_(Matrix::Identity(d, d)) {
    if (d < 1 || d > kMaxDim) {
        throw Error(ErrorKind::InvalidArgument, "dimension " + std::to_string(d) + " outside 1..6");
    }
}

UnimodularMatrix::UnimodularMatrix(Matrix entries, double log_scale, bool negative_det)
    : entries_(std::move(entries)), log_scale_(log_scale), negative_det_(negative_det) {}

UnimodularMatrix UnimodularMatrix::normalize(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimMismatch, "matrix is not square");
    }
    const auto d = static_cast<int>(m.rows());
    if (d < 2 || d > kMaxDim) {
        throw Error(ErrorKind::InvalidArgument, "dimension " + std::to_string(d) + " outside 2..6");
    }
    if (!m.allFinite()) {
        throw Error(ErrorKind::SingularInput, "non-finite entries");
    }
    const double det = m.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-300) {
        throw Error(ErrorKind::SingularInput, "determinant is zero or not representable");
    }
    const double log_det = std::log(std::abs(det));
    const double scale = std::exp(-log_det / d);
    return UnimodularMatrix(m * scale, log_det, det < 0.0);
}

UnimodularMatrix UnimodularMatrix::inverse() const {
    auto inv = normalize(entries_.inverse());
    inv.log_scale_ = -log_scale_;
    return inv;
}

UnimodularMatrix UnimodularMatrix::operator*(const UnimodularMatrix& rhs) const {
    if (dim() != rhs.dim()) {
        throw Error(ErrorKind::DimMismatch, "product of matrices of different dimension");
    }
    auto prod = normalize(entries_ * rhs.entries_);
    prod.log_scale_ = log_scale_ + rhs.log_scale_;
    return prod;
}

// ---------------------------------------------------------------------------
// ChamberVector

ChamberVector::ChamberVector(std::vector<double> coords) : coords_(std::move(coords)) {
    const double sum = std::accumulate(coords_.begin(), coords_.end(), 0.0);
    if (std::abs(sum) > 1e-9) {
        throw Error(ErrorKind::InvalidArgument, "chamber vector does not sum to zero");
    }
    for (std::size_t i = 0; i + 1 < coords_.size(); ++i) {
        if (coords_[i] < coords_[i + 1] - 1e-12) {
            throw Error(ErrorKind::InvalidArgument, "chamber vector is not decreasing");
        }
    }
}

ChamberVector ChamberVector::project(std::vector<double> coords) {
    std::sort(coords.begin(), coords.end(), std::greater<>());
    if (!coords.empty()) {
        const double mean = std::accumulate(coords.begin(), coords.end(), 0.0) /
                            static_cast<double>(coords.size());
        for (double& c : coords) {
            c -= mean;
        }
    }
    ChamberVector v;
    v.coords_ = std::move(coords);
    return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------
// Spectra

Vector singular_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    Vector s = svd.singularValues();
    if (!s.allFinite()) {
        throw Error(ErrorKind::NumericalFailure, "singular value decomposition failed");
    }
    return s;
}

Vector eigenvalue_moduli(const Matrix& m) {
    if (m.rows() == 1) {
        return Vector::Constant(1, std::abs(m(0, 0)));
    }
    Eigen::EigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericalFailure, "eigenvalue iteration did not converge");
    }
    Vector mod = es.eigenvalues().cwiseAbs();
    std::sort(mod.data(), mod.data() + mod.size(), std::greater<>());
    return mod;
}

// Both projections go through partial sums over exterior powers (see
// product.hpp); the smallest coordinates then come from |det| = 1 instead of
// from eigenvalues that sit at the rounding level of the largest ones.
ChamberVector cartan_projection(const UnimodularMatrix& g) {
    return ScaledProduct(CompoundGenerator::from(g)).cartan();
}

ChamberVector jordan_projection(const UnimodularMatrix& g) {
    return ScaledProduct(CompoundGenerator::from(g)).jordan();
}

// ---------------------------------------------------------------------------
// Exterior powers

std::vector<std::vector<int>> index_subsets(int d, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > d) {
        return out;
    }
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - k + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

Matrix exterior_power(const Matrix& m, int k) {
    const auto d = static_cast<int>(m.rows());
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimMismatch, "exterior power of a non-square matrix");
    }
    if (k < 1 || k > d) {
        throw Error(ErrorKind::BadIndex,
                    "exterior power k = " + std::to_string(k) + " outside 1.." + std::to_string(d));
    }
    if (k == 1) {
        return m;
    }
    const auto subsets = index_subsets(d, k);
    const auto n = static_cast<Eigen::Index>(subsets.size());
    Matrix out(n, n);
    Matrix minor(k, k);
    for (Eigen::Index I = 0; I < n; ++I) {
        const auto& rows = subsets[static_cast<std::size_t>(I)];
        for (Eigen::Index J = 0; J < n; ++J) {
            const auto& cols = subsets[static_cast<std::size_t>(J)];
            for (int a = 0; a < k; ++a) {
                for (int b = 0; b < k; ++b) {
                    minor(a, b) = m(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
                }
            }
            out(I, J) = minor.determinant();
        }
    }
    return out;
}

Matrix exterior_power(const UnimodularMatrix& g, int k) { return exterior_power(g.entries(), k); }

// ---------------------------------------------------------------------------
// Proximality

namespace {

// Real eigenvector for the eigenvalue of largest modulus.
Vector top_eigenvector(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m, true);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericalFailure, "eigenvector iteration did not converge");
    }
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    Vector v = es.eigenvectors().col(best).real();
    return v.normalized();
}

} // namespace

RepresentationProximality representation_proximality(const Matrix& m, int k, double r, double eps) {
    RepresentationProximality rep;
    rep.k = k;
    const Vector sv = singular_values(m);
    rep.sv_ratio = sv.size() > 1 ? sv[1] / sv[0] : 0.0;

    const Vector mod = eigenvalue_moduli(m);
    rep.eigen_gap = mod.size() > 1 ? mod[1] / mod[0] : 0.0;
    rep.degenerate_spectrum = mod.size() > 1 && (mod[0] - mod[1]) < kEigenGapTolerance * mod[0];

    if (!rep.degenerate_spectrum) {
        // The complementary invariant hyperplane is the kernel of the left
        // eigenvector, so the sine of the angle is |<u, v>| for unit u, v.
        const Vector v = top_eigenvector(m);
        const Vector u = top_eigenvector(m.transpose());
        rep.top_evec_distance = std::min(1.0, std::abs(u.dot(v)));
    }
    rep.eps_proximal = !rep.degenerate_spectrum && rep.sv_ratio <= eps;
    rep.r_eps_proximal = rep.eps_proximal && rep.top_evec_distance >= r;
    return rep;
}

namespace {

void check_proximality_params(double r, double eps) {
    if (!(eps > 0.0) || !(r > 0.0) || r > 1.0) {
        throw Error(ErrorKind::InvalidArgument, "proximality needs eps > 0 and 0 < r <= 1");
    }
}

} // namespace

ProximalityReport proximality_report(std::span<const Matrix> compounds, double r, double eps) {
    check_proximality_params(r, eps);
    ProximalityReport report;
    report.loxodromic = !compounds.empty();
    for (std::size_t i = 0; i < compounds.size(); ++i) {
        report.per_rep.push_back(
            representation_proximality(compounds[i], static_cast<int>(i) + 1, r, eps));
        report.loxodromic = report.loxodromic && report.per_rep.back().r_eps_proximal;
    }
    return report;
}

ProximalityReport proximality_report(const UnimodularMatrix& g, double r, double eps) {
    check_proximality_params(r, eps);
    std::vector<Matrix> compounds;
    for (int k = 1; k < g.dim(); ++k) {
        compounds.push_back(exterior_power(g, k));
    }
    return proximality_report(compounds, r, eps);
}

} // namespace jspec
