#pragma once

// Overflow-free products of unimodular matrices.
//
// A product P is tracked through its exterior powers C_k = wedge^k P for
// k = 1 .. d-1, each stored as a normalized matrix together with the log of
// the factor that was divided out.  Partial sums of the Cartan and Jordan
// projections are then
//
//   kappa_1 + ... + kappa_k  = log sigma_1(C_k)
//   lambda_1 + ... + lambda_k = log rho(C_k)
//
// which stay accurate when the small singular values of P are far below
// machine precision relative to the large ones.

#include <span>
#include <vector>

#include "jspec/linalg.hpp"

namespace jspec {

/// Exterior powers k = 1 .. d-1 of one generator, computed once.
struct CompoundGenerator {
    int dim = 0;
    std::vector<Matrix> by_k; // by_k[k-1] = wedge^k g

    static CompoundGenerator from(const UnimodularMatrix& g);
};

class ScaledProduct {
public:
    /// Identity (empty word) in dimension d.
    explicit ScaledProduct(int d);
    explicit ScaledProduct(const CompoundGenerator& g);

    /// P <- P * g
    void multiply_right(const CompoundGenerator& g);
    /// P <- g * P
    void multiply_left(const CompoundGenerator& g);
    /// P <- P * Q
    void multiply_right(const ScaledProduct& q);

    int dim() const noexcept { return dim_; }
    int length() const noexcept { return length_; }

    /// Normalized k-th compound, k in 1 .. d-1.
    const Matrix& compound(int k) const { return compounds_.at(static_cast<std::size_t>(k - 1)); }
    std::span<const Matrix> compounds() const noexcept { return compounds_; }
    /// The product's wedge^k equals exp(log_factor(k)) * compound(k).
    double log_factor(int k) const { return log_factors_.at(static_cast<std::size_t>(k - 1)); }

    /// log of the operator norm of wedge^k P; zero for k = 0 and k = d.
    double log_norm(int k) const;
    /// log of the spectral radius of wedge^k P; zero for k = 0 and k = d.
    double log_spectral_radius(int k) const;

    ChamberVector cartan() const;
    ChamberVector jordan() const;

    /// The product itself; may overflow for very long words.
    Matrix matrix() const;

private:
    void renormalize(std::size_t i);

    int dim_;
    int length_ = 0;
    std::vector<Matrix> compounds_;
    std::vector<double> log_factors_;
    Matrix scratch_;
};

} // namespace jspec
