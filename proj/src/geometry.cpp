#include "jspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jspec/rng.hpp"

namespace jspec {

std::vector<PlaneVector> hyperplane_basis(int d) {
    std::vector<PlaneVector> basis;
    for (int j = 1; j < d; ++j) {
        PlaneVector b(static_cast<std::size_t>(d), 0.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
        for (int i = 0; i < j; ++i) {
            b[static_cast<std::size_t>(i)] = scale;
        }
        b[static_cast<std::size_t>(j)] = -j * scale;
        basis.push_back(std::move(b));
    }
    return basis;
}

namespace {

PlaneVector lift(const std::vector<PlaneVector>& basis, std::span<const double> c) {
    PlaneVector u(basis.front().size(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] += c[j] * basis[j][i];
        }
    }
    const double n = norm(u);
    for (double& x : u) {
        x /= n;
    }
    return u;
}

PlaneVector negated(PlaneVector u) {
    for (double& x : u) {
        x = -x;
    }
    return u;
}

// Largest real root of x^(p+1) = x + 1, the generalized golden ratio.
double harmonious(int p) {
    double x = 2.0;
    for (int it = 0; it < 64; ++it) {
        x = std::pow(1.0 + x, 1.0 / (p + 1));
    }
    return x;
}

// `pairs` points on the unit sphere of R^p, p >= 2, in hyperplane
// coordinates.  Their negatives complete the direction set.
std::vector<std::vector<double>> sphere_sample(int p, int pairs, std::uint64_t seed) {
    std::vector<std::vector<double>> pts;
    const double offset = unit_interval(splitmix64(seed));
    if (p == 2) {
        // Equally spaced half circle; with negatives the full circle.
        for (int i = 0; i < pairs; ++i) {
            const double t = std::numbers::pi * (i + offset) / pairs;
            pts.push_back({std::cos(t), std::sin(t)});
        }
    } else if (p == 3) {
        // Fibonacci lattice on the upper hemisphere.
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int i = 0; i < pairs; ++i) {
            const double z = (i + 0.5) / pairs;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * std::numbers::pi * std::fmod(offset + i * golden, 1.0);
            pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
        }
    } else {
        // Additive recurrence with the generalized golden ratio, pushed
        // through Box-Muller and normalized.
        const int q = p + (p % 2);
        const double g = harmonious(q);
        std::vector<double> alpha(static_cast<std::size_t>(q));
        for (int j = 0; j < q; ++j) {
            alpha[static_cast<std::size_t>(j)] = std::pow(1.0 / g, j + 1);
        }
        for (int i = 0; i < pairs; ++i) {
            std::vector<double> u(static_cast<std::size_t>(q));
            for (int j = 0; j < q; ++j) {
                u[static_cast<std::size_t>(j)] = std::fmod(offset + (i + 1) * alpha[static_cast<std::size_t>(j)], 1.0);
            }
            std::vector<double> gauss;
            for (int j = 0; j < q; j += 2) {
                const double r = std::sqrt(-2.0 * std::log(1.0 - u[static_cast<std::size_t>(j)]));
                const double t = 2.0 * std::numbers::pi * u[static_cast<std::size_t>(j + 1)];
                gauss.push_back(r * std::cos(t));
                gauss.push_back(r * std::sin(t));
            }
            gauss.resize(static_cast<std::size_t>(p));
            pts.push_back(std::move(gauss));
        }
    }
    return pts;
}

} // namespace

PlaneVector projected_weight(int d, int k) {
    PlaneVector w(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        w[static_cast<std::size_t>(i)] = (i < k ? 1.0 : 0.0) - static_cast<double>(k) / d;
    }
    return w;
}

PlaneVector weight_direction(int d, int k) {
    PlaneVector w = projected_weight(d, k);
    const double n = norm(w);
    for (double& x : w) {
        x /= n;
    }
    return w;
}

DirectionSet::DirectionSet(int d, std::uint64_t seed, std::vector<PlaneVector> dirs)
    : dim_(d), seed_(seed), dirs_(std::make_shared<const std::vector<PlaneVector>>(std::move(dirs))) {}

DirectionSet DirectionSet::make(int d, int m, std::uint64_t seed) {
    if (d < 2 || d > kMaxDim) {
        throw Error(ErrorKind::InvalidArgument, "direction set dimension outside 2..6");
    }
    const int forced = 2 * (d - 1);
    if (m < forced) {
        throw Error(ErrorKind::BadResolution, "need at least " + std::to_string(forced) +
                                                  " directions in dimension " + std::to_string(d));
    }
    std::vector<PlaneVector> dirs;
    for (int k = 1; k < d; ++k) {
        dirs.push_back(weight_direction(d, k));
        dirs.push_back(negated(dirs.back()));
    }
    if (d > 2) {
        const int pairs = (m + 1) / 2 - (d - 1);
        const auto basis = hyperplane_basis(d);
        for (const auto& c : sphere_sample(d - 1, pairs, seed)) {
            dirs.push_back(lift(basis, c));
            dirs.push_back(negated(dirs.back()));
        }
    }
    return DirectionSet(d, seed, std::move(dirs));
}

std::optional<std::size_t> DirectionSet::find(std::span<const double> u, double tol) const {
    const double n = norm(u);
    if (n == 0.0) {
        return std::nullopt;
    }
    for (std::size_t j = 0; j < size(); ++j) {
        if (dot((*dirs_)[j], u) / n >= 1.0 - tol) {
            return j;
        }
    }
    return std::nullopt;
}

bool operator==(const DirectionSet& a, const DirectionSet& b) {
    return a.dim_ == b.dim_ && (a.dirs_ == b.dirs_ || *a.dirs_ == *b.dirs_);
}

// ---------------------------------------------------------------------------

SupportBody::SupportBody(DirectionSet dirs, std::vector<double> h, std::vector<PlaneVector> witnesses)
    : dirs_(std::move(dirs)), h_(std::move(h)), witnesses_(std::move(witnesses)) {
    if (h_.size() != dirs_.size()) {
        throw Error(ErrorKind::DimMismatch, "support vector length differs from direction count");
    }
}

double SupportBody::support_along(std::span<const double> w) const {
    if (const auto j = dirs_.find(w)) {
        return h_[*j] * norm(w);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : witnesses_) {
        best = std::max(best, dot(x, w));
    }
    return best;
}

SupportAccumulator::SupportAccumulator(DirectionSet dirs)
    : dirs_(std::move(dirs)),
      h_(dirs_.size(), -std::numeric_limits<double>::infinity()),
      argmax_(dirs_.size()) {}

void SupportAccumulator::add(std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(dirs_.dim())) {
        throw Error(ErrorKind::DimMismatch, "point dimension differs from direction set");
    }
    for (std::size_t j = 0; j < h_.size(); ++j) {
        const double v = dot(x, dirs_[j]);
        if (v > h_[j]) {
            h_[j] = v;
            argmax_[j].assign(x.begin(), x.end());
        }
    }
    ++count_;
}

void SupportAccumulator::merge(const SupportAccumulator& other) {
    if (!(dirs_ == other.dirs_)) {
        throw Error(ErrorKind::DirsetMismatch, "merging accumulators over different directions");
    }
    for (std::size_t j = 0; j < h_.size(); ++j) {
        if (other.h_[j] > h_[j]) {
            h_[j] = other.h_[j];
            argmax_[j] = other.argmax_[j];
        }
    }
    count_ += other.count_;
}

SupportBody SupportAccumulator::finish() const {
    if (count_ == 0) {
        throw Error(ErrorKind::EmptyInput, "support body of an empty point set");
    }
    std::vector<PlaneVector> witnesses;
    for (const auto& w : argmax_) {
        if (std::find(witnesses.begin(), witnesses.end(), w) == witnesses.end()) {
            witnesses.push_back(w);
        }
    }
    return SupportBody(dirs_, h_, std::move(witnesses));
}

SupportBody body_from_points(std::span<const PlaneVector> pts, const DirectionSet& dirs) {
    SupportAccumulator acc(dirs);
    for (const auto& p : pts) {
        acc.add(p);
    }
    return acc.finish();
}

SupportBody body_from_points(std::span<const ChamberVector> pts, const DirectionSet& dirs) {
    SupportAccumulator acc(dirs);
    for (const auto& p : pts) {
        acc.add(p);
    }
    return acc.finish();
}

double hausdorff_distance(const SupportBody& a, const SupportBody& b) {
    if (!(a.directions() == b.directions())) {
        throw Error(ErrorKind::DirsetMismatch, "bodies use different direction sets");
    }
    double dist = 0.0;
    for (std::size_t j = 0; j < a.support().size(); ++j) {
        dist = std::max(dist, std::abs(a.support(j) - b.support(j)));
    }
    return dist;
}

bool contains(const SupportBody& body, std::span<const double> x, double tol) {
    const auto& dirs = body.directions();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        if (dot(x, dirs[j]) > body.support(j) + tol) {
            return false;
        }
    }
    return true;
}

double interior_margin(const SupportBody& body, std::span<const double> x) {
    const auto& dirs = body.directions();
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        margin = std::min(margin, body.support(j) - dot(x, dirs[j]));
    }
    return margin;
}

SupportBody asymptotic_cone(const SupportBody& body) {
    SupportAccumulator acc(body.directions());
    for (const auto& w : body.witnesses()) {
        const double n = norm(w);
        if (n <= 1e-12) {
            continue;
        }
        PlaneVector unit = w;
        for (double& x : unit) {
            x /= n;
        }
        acc.add(unit);
    }
    if (acc.empty()) {
        throw Error(ErrorKind::DegenerateBody, "every witness lies at the origin");
    }
    return acc.finish();
}

} // namespace jspec
