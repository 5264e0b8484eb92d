#include "jspec/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "jspec/parallel.hpp"
#include "jspec/rng.hpp"

namespace jspec {

std::string format_word(std::span<const std::size_t> word) {
    std::ostringstream os;
    for (std::size_t i = 0; i < word.size(); ++i) {
        os << (i ? "." : "") << word[i];
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// MatrixSet

MatrixSet::MatrixSet(std::vector<UnimodularMatrix> gens, std::vector<double> weights,
                     std::vector<std::string> labels)
    : gens_(std::move(gens)), weights_(std::move(weights)), labels_(std::move(labels)) {
    if (gens_.empty()) {
        throw Error(ErrorKind::EmptyInput, "matrix set has no generators");
    }
    dim_ = gens_.front().dim();
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].dim() != dim_) {
            throw Error(ErrorKind::DimMismatch, "generator " + std::to_string(i) + " has dimension " +
                                                    std::to_string(gens_[i].dim()) + ", expected " +
                                                    std::to_string(dim_));
        }
        compounds_.push_back(CompoundGenerator::from(gens_[i]));
    }
    if (!weights_.empty()) {
        if (weights_.size() != gens_.size()) {
            throw Error(ErrorKind::InvalidArgument, "weights and generators differ in number");
        }
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw Error(ErrorKind::InvalidArgument, "weights must be finite and nonnegative");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw Error(ErrorKind::InvalidArgument, "weights sum to " + std::to_string(sum) + ", not 1");
        }
    }
    if (!labels_.empty() && labels_.size() != gens_.size()) {
        throw Error(ErrorKind::InvalidArgument, "labels and generators differ in number");
    }
}

std::vector<double> MatrixSet::probabilities() const {
    if (!weights_.empty()) {
        return weights_;
    }
    return std::vector<double>(gens_.size(), 1.0 / static_cast<double>(gens_.size()));
}

ScaledProduct MatrixSet::product(std::span<const std::size_t> word) const {
    ScaledProduct p(dim_);
    for (std::size_t letter : word) {
        p.multiply_right(compounds_.at(letter));
    }
    return p;
}

UnimodularMatrix MatrixSet::word_matrix(std::span<const std::size_t> word) const {
    UnimodularMatrix p(dim_);
    for (std::size_t letter : word) {
        p = p * gens_.at(letter);
    }
    return p;
}

MatrixSet MatrixSet::with_words(std::span<const Word> recipes, bool keep_generators) const {
    std::vector<UnimodularMatrix> gens;
    std::vector<std::string> labels;
    if (keep_generators) {
        gens = gens_;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            labels.push_back(labels_.empty() ? std::to_string(i) : labels_[i]);
        }
    }
    for (const auto& w : recipes) {
        if (w.empty()) {
            throw Error(ErrorKind::InvalidArgument, "empty word recipe");
        }
        for (std::size_t letter : w) {
            if (letter >= gens_.size()) {
                throw Error(ErrorKind::BadIndex, "word recipe refers to generator " + std::to_string(letter));
            }
        }
        gens.push_back(word_matrix(w));
        labels.push_back(format_word(w));
    }
    return MatrixSet(std::move(gens), {}, std::move(labels));
}

// ---------------------------------------------------------------------------
// Enumeration

std::string_view to_string(EnumerationMode mode) {
    return mode == EnumerationMode::Exhaustive ? "exhaustive" : "sampled";
}

namespace {

// q^n, saturating at max + 1 of size_t.
std::size_t saturating_power(std::size_t q, int n) {
    std::size_t p = 1;
    for (int i = 0; i < n; ++i) {
        if (p > std::numeric_limits<std::size_t>::max() / q) {
            return std::numeric_limits<std::size_t>::max();
        }
        p *= q;
    }
    return p;
}

void check_enumeration(const MatrixSet& set, int n, const EnumerationOptions& opts) {
    if (n < 1) {
        throw Error(ErrorKind::InvalidArgument, "word length must be at least 1");
    }
    if (opts.budget < set.size()) {
        throw Error(ErrorKind::InvalidArgument, "budget is smaller than the generating set");
    }
}

void visit_checked(const ProductVisitor& visit, std::span<const std::size_t> word, const ScaledProduct& p) {
    try {
        visit(word, p);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (word " + format_word(word) + ")");
    }
}

// Words of length n whose lexicographic index lies in [begin, end).
void exhaustive_range(const MatrixSet& set, int n, std::size_t begin, std::size_t end, const ProductVisitor& visit) {
    const std::size_t q = set.size();
    std::vector<std::size_t> span_at(static_cast<std::size_t>(n) + 1);
    for (int level = 0; level <= n; ++level) {
        span_at[static_cast<std::size_t>(level)] = saturating_power(q, n - level);
    }
    std::vector<ScaledProduct> stack;
    stack.reserve(static_cast<std::size_t>(n) + 1);
    stack.emplace_back(set.dim());
    Word word;
    word.reserve(static_cast<std::size_t>(n));

    const auto dfs = [&](auto&& self, int level, std::size_t prefix) -> void {
        const std::size_t width = span_at[static_cast<std::size_t>(level)];
        const std::size_t lo = prefix * width;
        if (lo >= end || lo + width <= begin) {
            return;
        }
        if (level == n) {
            visit_checked(visit, word, stack.back());
            return;
        }
        for (std::size_t g = 0; g < q; ++g) {
            word.push_back(g);
            stack.push_back(stack.back());
            try {
                stack.back().multiply_right(set.compounds()[g]);
            } catch (const Error& e) {
                throw Error(e.kind(), std::string(e.what()) + " (word " + format_word(word) + ")");
            }
            self(self, level + 1, prefix * q + g);
            stack.pop_back();
            word.pop_back();
        }
    };
    dfs(dfs, 0, 0);
}

void sampled_range(const MatrixSet& set, int n, std::uint64_t seed, std::size_t begin, std::size_t end,
                   const ProductVisitor& visit) {
    Word word(static_cast<std::size_t>(n));
    for (std::size_t i = begin; i < end; ++i) {
        Stream stream(derive_seed(seed, static_cast<std::uint64_t>(n), i));
        for (auto& letter : word) {
            letter = stream.below(set.size());
        }
        ScaledProduct p(set.dim());
        try {
            for (std::size_t letter : word) {
                p.multiply_right(set.compounds()[letter]);
            }
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (word " + format_word(word) + ")");
        }
        visit_checked(visit, word, p);
    }
}

void enumerate_range(const MatrixSet& set, int n, EnumerationMode mode, std::uint64_t seed, std::size_t begin,
                     std::size_t end, const ProductVisitor& visit) {
    if (mode == EnumerationMode::Exhaustive) {
        exhaustive_range(set, n, begin, end, visit);
    } else {
        sampled_range(set, n, seed, begin, end, visit);
    }
}

std::size_t word_count(const MatrixSet& set, int n, EnumerationMode mode, std::size_t budget) {
    return mode == EnumerationMode::Exhaustive ? saturating_power(set.size(), n) : budget;
}

constexpr std::size_t kChunks = 64;

struct LevelBodies {
    SupportAccumulator kappa;
    SupportAccumulator lambda;
    EnumerationMode mode;
    std::size_t count;
};

LevelBodies level_bodies(const MatrixSet& set, int n, const DirectionSet& dirs, const EnumerationOptions& opts,
                         bool with_lambda) {
    check_enumeration(set, n, opts);
    if (dirs.dim() != set.dim()) {
        throw Error(ErrorKind::DimMismatch, "direction set and matrix set differ in dimension");
    }
    const auto mode = enumeration_mode(set.size(), n, opts.budget);
    const std::size_t total = word_count(set, n, mode, opts.budget);
    const auto chunks = std::min(kChunks, total);
    std::vector<SupportAccumulator> kappa(chunks, SupportAccumulator(dirs));
    std::vector<SupportAccumulator> lambda(chunks, SupportAccumulator(dirs));
    const double inv_n = 1.0 / n;

    parallel_chunks(total, chunks, opts.workers, [&](std::size_t begin, std::size_t end, std::size_t c) {
        std::vector<double> scaled(static_cast<std::size_t>(set.dim()));
        const auto add_scaled = [&](SupportAccumulator& acc, const ChamberVector& v) {
            for (std::size_t i = 0; i < scaled.size(); ++i) {
                scaled[i] = v[i] * inv_n;
            }
            acc.add(scaled);
        };
        enumerate_range(set, n, mode, opts.seed, begin, end, [&](std::span<const std::size_t>, const ScaledProduct& p) {
            add_scaled(kappa[c], p.cartan());
            if (with_lambda) {
                add_scaled(lambda[c], p.jordan());
            }
        });
    });
    for (std::size_t c = 1; c < chunks; ++c) {
        kappa[0].merge(kappa[c]);
        lambda[0].merge(lambda[c]);
    }
    return {std::move(kappa[0]), std::move(lambda[0]), mode, total};
}

} // namespace

EnumerationMode enumeration_mode(std::size_t generators, int n, std::size_t budget) {
    return saturating_power(generators, n) <= budget ? EnumerationMode::Exhaustive : EnumerationMode::Sampled;
}

EnumerationSummary enumerate_products(const MatrixSet& set, int n, const EnumerationOptions& opts,
                                      const ProductVisitor& visit) {
    check_enumeration(set, n, opts);
    EnumerationSummary summary;
    summary.mode = enumeration_mode(set.size(), n, opts.budget);
    const std::size_t total = word_count(set, n, summary.mode, opts.budget);
    enumerate_range(set, n, summary.mode, opts.seed, 0, total, [&](std::span<const std::size_t> w, const ScaledProduct& p) {
        visit(w, p);
        ++summary.count;
    });
    return summary;
}

std::vector<SpectrumEstimate> joint_spectrum_estimate(const MatrixSet& set, int n_max, const DirectionSet& dirs,
                                                      const EnumerationOptions& opts) {
    if (n_max < 1) {
        throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
    }
    std::vector<SpectrumEstimate> levels;
    for (int n = 1; n <= n_max; ++n) {
        auto bodies = level_bodies(set, n, dirs, opts, true);
        SpectrumEstimate est{n, bodies.kappa.finish(), bodies.lambda.finish(), 0.0,
                             std::numeric_limits<double>::infinity(), bodies.count, bodies.mode};
        est.d_kl = hausdorff_distance(est.kappa_body, est.lambda_body);
        if (!levels.empty()) {
            est.d_step = hausdorff_distance(est.kappa_body, levels.back().kappa_body);
        }
        levels.push_back(std::move(est));
    }
    return levels;
}

SupportBody kappa_body(const MatrixSet& set, int n, const DirectionSet& dirs, const EnumerationOptions& opts) {
    return level_bodies(set, n, dirs, opts, false).kappa.finish();
}

double cone_invariance_check(const MatrixSet& set, const MatrixSet& other, int n, const DirectionSet& dirs,
                             const EnumerationOptions& opts) {
    if (set.dim() != other.dim()) {
        throw Error(ErrorKind::DimMismatch, "generating sets differ in dimension");
    }
    const auto a = asymptotic_cone(kappa_body(set, n, dirs, opts));
    const auto b = asymptotic_cone(kappa_body(other, n, dirs, opts));
    return hausdorff_distance(a, b);
}

} // namespace jspec
