#pragma once

// Convex bodies in the trace-zero hyperplane of R^d, represented by their
// support function h(u) = max <x, u> sampled on a fixed set of unit
// directions.  For convex bodies the Hausdorff distance is the sup-norm of
// the difference of support functions, so every quantity here is computed
// from the sampled h-vectors; the sampling makes each body an outer
// approximation whose error shrinks as the direction set is refined.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "jspec/linalg.hpp"

namespace jspec {

class DirectionSet {
public:
    /// make_directions.  Always contains +-w_k / |w_k| for the projected
    /// fundamental weights w_k = (1,..,1,0,..,0) - k/d, k = 1 .. d-1; in d = 2
    /// these are the only two unit vectors of the hyperplane and m is
    /// clamped to 2.  The rest is a deterministic low-discrepancy sample of
    /// the hyperplane sphere, closed under negation (odd m rounds up).
    /// Throws BadResolution when m < 2(d-1).
    static DirectionSet make(int d, int m, std::uint64_t seed);

    /// Default resolution 64 (d - 1).
    static int default_resolution(int d) { return 64 * (d - 1); }

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dirs_->size(); }
    std::uint64_t seed() const noexcept { return seed_; }
    const PlaneVector& operator[](std::size_t j) const { return (*dirs_)[j]; }
    const std::vector<PlaneVector>& vectors() const noexcept { return *dirs_; }

    /// Index of a direction within angle tolerance of u/|u|.
    std::optional<std::size_t> find(std::span<const double> u, double tol = 1e-12) const;

    friend bool operator==(const DirectionSet& a, const DirectionSet& b);

private:
    DirectionSet(int d, std::uint64_t seed, std::vector<PlaneVector> dirs);

    int dim_ = 0;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const std::vector<PlaneVector>> dirs_;
};

/// Orthonormal basis of the trace-zero hyperplane of R^d:
/// b_j = (1, .., 1, -j, 0, .., 0) / sqrt(j (j + 1)), j = 1 .. d-1.
std::vector<PlaneVector> hyperplane_basis(int d);

/// The unit vector along the k-th fundamental weight projected to the
/// trace-zero hyperplane, and that projected weight itself.
PlaneVector weight_direction(int d, int k);
PlaneVector projected_weight(int d, int k);

class SupportBody {
public:
    /// h and witnesses are taken as given; witnesses may be empty.
    SupportBody(DirectionSet dirs, std::vector<double> h, std::vector<PlaneVector> witnesses = {});

    const DirectionSet& directions() const noexcept { return dirs_; }
    int dim() const noexcept { return dirs_.dim(); }
    const std::vector<double>& support() const noexcept { return h_; }
    double support(std::size_t j) const { return h_[j]; }
    /// Extreme points realizing the maximum in at least one direction.
    const std::vector<PlaneVector>& witnesses() const noexcept { return witnesses_; }

    /// sup over the body of <x, w>.  Exact from h when w/|w| is in the
    /// direction set, otherwise the maximum over retained witnesses (an
    /// inner value).
    double support_along(std::span<const double> w) const;

private:
    DirectionSet dirs_;
    std::vector<double> h_;
    std::vector<PlaneVector> witnesses_;
};

/// Streaming max-merge of support values; merging accumulators in a fixed
/// order gives the same body as adding all points sequentially.
class SupportAccumulator {
public:
    explicit SupportAccumulator(DirectionSet dirs);

    void add(std::span<const double> x);
    void add(const ChamberVector& x) { add(x.span()); }
    void merge(const SupportAccumulator& other);

    bool empty() const noexcept { return count_ == 0; }
    std::size_t count() const noexcept { return count_; }

    /// Throws EmptyInput when nothing was added.
    SupportBody finish() const;

private:
    DirectionSet dirs_;
    std::vector<double> h_;
    std::vector<PlaneVector> argmax_;
    std::size_t count_ = 0;
};

/// body_from_points.  Throws EmptyInput / DimMismatch.
SupportBody body_from_points(std::span<const PlaneVector> pts, const DirectionSet& dirs);
SupportBody body_from_points(std::span<const ChamberVector> pts, const DirectionSet& dirs);

/// max_j |h_A,j - h_B,j|.  Throws DirsetMismatch.
double hausdorff_distance(const SupportBody& a, const SupportBody& b);

/// Outer membership test: <x, u_j> <= h_j + tol for every direction.
bool contains(const SupportBody& body, std::span<const double> x, double tol = 0.0);

/// min_j (h_j - <x, u_j>); positive means x is interior to the outer body.
double interior_margin(const SupportBody& body, std::span<const double> x);

/// The trace of the cone over the body on the unit sphere: every witness
/// radially normalized, witnesses at the origin dropped.  Throws
/// DegenerateBody if no witness is farther than 1e-12 from the origin.
SupportBody asymptotic_cone(const SupportBody& body);

} // namespace jspec
