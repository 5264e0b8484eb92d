#include "jspec/product.hpp"

#include <cmath>
#include <numbers>

namespace jspec {

CompoundGenerator CompoundGenerator::from(const UnimodularMatrix& g) {
    CompoundGenerator out;
    out.dim = g.dim();
    for (int k = 1; k < g.dim(); ++k) {
        out.by_k.push_back(exterior_power(g, k));
    }
    return out;
}

ScaledProduct::ScaledProduct(int d) : dim_(d) {
    if (d < 2 || d > kMaxDim) {
        throw Error(ErrorKind::InvalidArgument, "product dimension outside 2..6");
    }
    const auto subsets = [d](int k) {
        return static_cast<Eigen::Index>(index_subsets(d, k).size());
    };
    for (int k = 1; k < d; ++k) {
        compounds_.push_back(Matrix::Identity(subsets(k), subsets(k)));
        log_factors_.push_back(0.0);
    }
}

ScaledProduct::ScaledProduct(const CompoundGenerator& g) : ScaledProduct(g.dim) {
    multiply_right(g);
}

void ScaledProduct::renormalize(std::size_t i) {
    const double peak = compounds_[i].cwiseAbs().maxCoeff();
    if (!std::isfinite(peak) || peak == 0.0) {
        throw Error(ErrorKind::NumericalFailure,
                    "product degenerated at word length " + std::to_string(length_));
    }
    // Scaling by a power of two is exact.
    int exponent = 0;
    std::frexp(peak, &exponent);
    compounds_[i] = compounds_[i] * std::ldexp(1.0, -exponent);
    log_factors_[i] += exponent * std::numbers::ln2;
}

void ScaledProduct::multiply_right(const CompoundGenerator& g) {
    if (g.dim != dim_) {
        throw Error(ErrorKind::DimMismatch, "generator dimension differs from product");
    }
    for (std::size_t i = 0; i < compounds_.size(); ++i) {
        scratch_.noalias() = compounds_[i] * g.by_k[i];
        compounds_[i].swap(scratch_);
        renormalize(i);
    }
    ++length_;
}

void ScaledProduct::multiply_left(const CompoundGenerator& g) {
    if (g.dim != dim_) {
        throw Error(ErrorKind::DimMismatch, "generator dimension differs from product");
    }
    for (std::size_t i = 0; i < compounds_.size(); ++i) {
        scratch_.noalias() = g.by_k[i] * compounds_[i];
        compounds_[i].swap(scratch_);
        renormalize(i);
    }
    ++length_;
}

void ScaledProduct::multiply_right(const ScaledProduct& q) {
    if (q.dim_ != dim_) {
        throw Error(ErrorKind::DimMismatch, "products of different dimension");
    }
    for (std::size_t i = 0; i < compounds_.size(); ++i) {
        scratch_.noalias() = compounds_[i] * q.compounds_[i];
        compounds_[i].swap(scratch_);
        log_factors_[i] += q.log_factors_[i];
        renormalize(i);
    }
    length_ += q.length_;
}

double ScaledProduct::log_norm(int k) const {
    if (k == 0 || k == dim_) {
        return 0.0;
    }
    const Matrix& c = compound(k);
    return std::log(singular_values(c)[0]) + log_factor(k);
}

double ScaledProduct::log_spectral_radius(int k) const {
    if (k == 0 || k == dim_) {
        return 0.0;
    }
    const double rho = eigenvalue_moduli(compound(k))[0];
    if (!(rho > 0.0)) {
        throw Error(ErrorKind::NumericalFailure, "vanishing spectral radius");
    }
    return std::log(rho) + log_factor(k);
}

namespace {

template <class PartialSum>
ChamberVector from_partial_sums(int d, PartialSum&& partial) {
    std::vector<double> coords(static_cast<std::size_t>(d));
    double previous = 0.0;
    for (int k = 1; k <= d; ++k) {
        const double current = partial(k);
        coords[static_cast<std::size_t>(k - 1)] = current - previous;
        previous = current;
    }
    return ChamberVector::project(std::move(coords));
}

} // namespace

ChamberVector ScaledProduct::cartan() const {
    return from_partial_sums(dim_, [this](int k) { return log_norm(k); });
}

ChamberVector ScaledProduct::jordan() const {
    return from_partial_sums(dim_, [this](int k) { return log_spectral_radius(k); });
}

Matrix ScaledProduct::matrix() const { return compound(1) * std::exp(log_factor(1)); }

} // namespace jspec
