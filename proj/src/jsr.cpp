#include "jspec/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace jspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxFrontier = std::size_t{1} << 22;

struct Node {
    Word word;
    Matrix scaled;     // product / exp(log_factor)
    double log_factor = 0.0;
    double bound = 0.0; // min over prefixes of (1/len) log ||prefix||
    bool zero = false;
};

void rescale(Node& node) {
    const double peak = node.scaled.cwiseAbs().maxCoeff();
    if (peak == 0.0) {
        node.zero = true;
        return;
    }
    if (!std::isfinite(peak)) {
        throw Error(ErrorKind::NumericalFailure, "non-finite product for word " + format_word(node.word));
    }
    int exponent = 0;
    std::frexp(peak, &exponent);
    node.scaled *= std::ldexp(1.0, -exponent);
    node.log_factor += exponent * std::numbers::ln2;
}

double log_norm(const Node& node) {
    return node.zero ? kNegInf : std::log(singular_values(node.scaled)[0]) + node.log_factor;
}

double log_rho(const Node& node) {
    if (node.zero) {
        return kNegInf;
    }
    const double rho = eigenvalue_moduli(node.scaled)[0];
    return rho > 0.0 ? std::log(rho) + node.log_factor : kNegInf;
}

} // namespace

JsrBounds jsr_bounds(std::span<const Matrix> mats, int depth, double prune_delta) {
    if (mats.empty()) {
        throw Error(ErrorKind::EmptyInput, "joint spectral radius of an empty set");
    }
    if (depth < 1 || !(prune_delta >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "need depth >= 1 and prune_delta >= 0");
    }
    const auto size = mats.front().rows();
    for (const auto& m : mats) {
        if (m.rows() != size || m.cols() != size) {
            throw Error(ErrorKind::DimMismatch, "matrices must be square and of equal size");
        }
        if (!m.allFinite()) {
            throw Error(ErrorKind::InvalidArgument, "non-finite matrix entries");
        }
    }

    JsrBounds out;
    out.prune_delta = prune_delta;
    out.lower = kNegInf;
    double pruned_bound = kNegInf;

    std::vector<Node> level;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        Node node{{i}, mats[i], 0.0, 0.0, false};
        rescale(node);
        level.push_back(std::move(node));
    }

    for (int len = 1; len <= depth && !level.empty(); ++len) {
        // Bounds and the incumbent come from the complete level before any pruning.
        for (auto& node : level) {
            const double rate = log_norm(node) / len;
            node.bound = len == 1 ? rate : std::min(node.bound, rate);
            const double candidate = log_rho(node) / len;
            if (candidate > out.lower ||
                (candidate == out.lower && candidate > kNegInf &&
                 std::lexicographical_compare(node.word.begin(), node.word.end(), out.witness.begin(),
                                              out.witness.end()))) {
                out.lower = candidate;
                out.witness = node.word;
            }
        }
        out.explored += level.size();

        std::vector<Node> kept;
        double frontier_bound = kNegInf;
        for (auto& node : level) {
            if (node.bound < out.lower + prune_delta) {
                pruned_bound = std::max(pruned_bound, node.bound);
            } else {
                frontier_bound = std::max(frontier_bound, node.bound);
                kept.push_back(std::move(node));
            }
        }
        const double upper = std::max(pruned_bound, frontier_bound);
        out.upper = len == 1 ? upper : std::min(out.upper, upper);
        // log rho and log ||.|| of a normal product agree only to rounding;
        // lower <= log r(M) holds regardless, so keep the bracket ordered
        out.upper = std::max(out.upper, out.lower);
        out.depth = len;
        out.levels.push_back({len, out.explored, kept.size(), out.lower, out.upper, out.witness});

        if (len == depth || kept.size() * mats.size() > kMaxFrontier) {
            break;
        }
        std::vector<Node> next;
        next.reserve(kept.size() * mats.size());
        for (const auto& parent : kept) {
            for (std::size_t i = 0; i < mats.size(); ++i) {
                Node child{parent.word, Matrix(), parent.log_factor, parent.bound, parent.zero};
                child.word.push_back(i);
                if (!parent.zero) {
                    child.scaled.noalias() = parent.scaled * mats[i];
                    rescale(child);
                }
                next.push_back(std::move(child));
            }
        }
        level = std::move(next);
    }
    return out;
}

BergerWangResult berger_wang_check(const MatrixSet& set, int k, int depth, const SpectrumEstimate& spectrum,
                                   double prune_delta) {
    const int d = set.dim();
    if (k < 1 || k > d - 1) {
        throw Error(ErrorKind::BadIndex, "weight index k = " + std::to_string(k) + " outside 1.." +
                                             std::to_string(d - 1));
    }
    if (spectrum.kappa_body.dim() != d) {
        throw Error(ErrorKind::DimMismatch, "spectrum estimate was computed in another dimension");
    }
    std::vector<Matrix> powers;
    for (const auto& g : set.compounds()) {
        powers.push_back(g.by_k[static_cast<std::size_t>(k - 1)]);
    }
    BergerWangResult res;
    res.k = k;
    // On the hyperplane z_1 + .. + z_k equals <z, projected weight>.
    res.lhs = spectrum.kappa_body.support_along(projected_weight(d, k));
    res.bounds = jsr_bounds(powers, depth, prune_delta);
    res.lower = res.bounds.lower;
    res.upper = res.bounds.upper;
    res.rhs = 0.5 * (res.lower + res.upper);
    res.gap = res.lhs < res.lower ? res.lower - res.lhs : (res.lhs > res.upper ? res.lhs - res.upper : 0.0);
    return res;
}

} // namespace jspec
