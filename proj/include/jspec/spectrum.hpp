#pragma once

// Product sets S^n and the joint-spectrum approximants
//   K_n = hull(kappa(S^n) / n),   L_n = hull(lambda(S^n) / n).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jspec/geometry.hpp"
#include "jspec/product.hpp"

namespace jspec {

using Word = std::vector<std::size_t>;

std::string format_word(std::span<const std::size_t> word);

/// A finite generating set, optionally weighted (the weights define the
/// step law of a random walk).
class MatrixSet {
public:
    /// Throws DimMismatch for mixed dimensions, EmptyInput for no
    /// generators, InvalidArgument for bad weights or labels.
    explicit MatrixSet(std::vector<UnimodularMatrix> gens, std::vector<double> weights = {},
                       std::vector<std::string> labels = {});

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return gens_.size(); }
    const std::vector<UnimodularMatrix>& generators() const noexcept { return gens_; }
    const UnimodularMatrix& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<CompoundGenerator>& compounds() const noexcept { return compounds_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    /// Explicit weights as given; empty when none were supplied.
    const std::vector<double>& weights() const noexcept { return weights_; }
    /// The step law: explicit weights, or uniform.
    std::vector<double> probabilities() const;

    /// Product of generators along a word, left to right.
    ScaledProduct product(std::span<const std::size_t> word) const;
    UnimodularMatrix word_matrix(std::span<const std::size_t> word) const;

    /// A set generating a sub-semigroup: the listed words, optionally after
    /// the original generators.  Weights are dropped.
    MatrixSet with_words(std::span<const Word> recipes, bool keep_generators) const;

private:
    int dim_ = 0;
    std::vector<UnimodularMatrix> gens_;
    std::vector<CompoundGenerator> compounds_;
    std::vector<double> weights_;
    std::vector<std::string> labels_;
};

enum class EnumerationMode { Exhaustive, Sampled };

std::string_view to_string(EnumerationMode mode);

inline constexpr std::size_t kDefaultBudget = 2'000'000;

struct EnumerationOptions {
    std::size_t budget = kDefaultBudget;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Exhaustive when |S|^n <= budget.
EnumerationMode enumeration_mode(std::size_t generators, int n, std::size_t budget);

struct EnumerationSummary {
    EnumerationMode mode = EnumerationMode::Exhaustive;
    std::size_t count = 0;
};

using ProductVisitor = std::function<void(std::span<const std::size_t> word, const ScaledProduct& product)>;

/// Streams every word of length n (lexicographic order) or, past the budget,
/// `budget` uniformly random words; word i of the sample is drawn from its
/// own stream derived from (seed, n, i).  Throws InvalidArgument for n < 1
/// or budget < |S|.
EnumerationSummary enumerate_products(const MatrixSet& set, int n, const EnumerationOptions& opts,
                                      const ProductVisitor& visit);

struct SpectrumEstimate {
    int n = 0;
    SupportBody kappa_body;
    SupportBody lambda_body;
    double d_kl = 0.0;   // Hausdorff distance between the two bodies
    double d_step = 0.0; // distance of kappa_body to the previous level; +inf at the first level
    std::size_t product_count = 0;
    EnumerationMode mode = EnumerationMode::Exhaustive;
};

/// One approximant per level n = 1 .. n_max; the last is the best estimate.
/// Zariski density of the generated semigroup is assumed, not checked; a
/// d_kl that does not shrink is the visible symptom when it fails.
std::vector<SpectrumEstimate> joint_spectrum_estimate(const MatrixSet& set, int n_max, const DirectionSet& dirs,
                                                      const EnumerationOptions& opts = {});

/// The level-n Cartan body alone.
SupportBody kappa_body(const MatrixSet& set, int n, const DirectionSet& dirs, const EnumerationOptions& opts = {});

/// Hausdorff distance between the cone traces of the level-n Cartan bodies of
/// two generating sets of the same semigroup.
double cone_invariance_check(const MatrixSet& set, const MatrixSet& other, int n, const DirectionSet& dirs,
                             const EnumerationOptions& opts = {});

} // namespace jspec
