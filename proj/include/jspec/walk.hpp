#pragma once

// Monte Carlo over mu-random walks Y_n = X_n ... X_1 with X_i iid of law
// sum_i w_i delta_{g_i}.  Walker j draws its increments from the stream
// derive_seed(seed, j), so every estimate is a deterministic function of
// (config, seed) whatever the worker count.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jspec/spectrum.hpp"

namespace jspec {

struct WalkConfig {
    MatrixSet set;
    int n = 1;
    std::size_t samples = 10'000;
    std::uint64_t seed = 0;
    std::vector<int> checkpoints; // sorted, each in 1..n; empty means {n}
    unsigned workers = 1;

    /// Throws InvalidArgument on a malformed configuration.
    void validate() const;
    std::vector<int> effective_checkpoints() const;
};

enum class Projection { Kappa, Lambda };

/// kappa(Y_m) / m at every checkpoint m.  kappa comes from the exterior
/// power accumulation of the walk, which is the exact Cartan projection up
/// to rounding at any length.
std::vector<ChamberVector> run_walk(const WalkConfig& cfg, std::uint64_t walker_id,
                                    Projection projection = Projection::Kappa);

struct LyapunovEstimate {
    ChamberVector vec;
    std::vector<double> std_error; // per coordinate
    double stderr_norm() const;
};

/// Mean and standard error of kappa(Y_n) / n over cfg.samples walkers.
LyapunovEstimate lyapunov_estimate(const WalkConfig& cfg);

/// Axis-aligned box over the first d-1 chamber coordinates (the last one is
/// minus their sum).
struct GridSpec {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<int> cells;

    int axes() const noexcept { return static_cast<int>(cells.size()); }
    std::size_t cell_count() const;
    double width(int axis) const;
    /// Euclidean length of a cell diagonal measured in R^d.
    double cell_diagonal() const;
    std::vector<int> unflatten(std::size_t flat) const;
    std::size_t flatten(std::span<const int> index) const;
    PlaneVector cell_center(std::size_t flat) const;
    /// Cell containing x (half-open cells, top edge closed), if any.
    std::optional<std::size_t> locate(std::span<const double> x) const;
};

struct RateGrid {
    GridSpec grid;
    int n = 0;
    std::size_t samples = 0;
    std::vector<std::size_t> counts;
    std::vector<double> i_hat;   // +inf where counts == 0
    std::size_t outside = 0;     // samples that fell outside the box
    double noise_floor = 0.0;    // (1/n) log(samples)
    std::size_t argmin = 0;      // cell with the smallest i_hat (most hits)
};

/// Empirical rate function -(1/n) log(count / samples) per cell.
RateGrid rate_function_estimate(const WalkConfig& cfg, const GridSpec& grid, Projection projection = Projection::Kappa);

struct DecayPoint {
    int n = 0;
    std::size_t count = 0;
    double phat = 0.0;
    double log_phat = 0.0; // -inf when count == 0
    bool used = false;
};

struct DecayFit {
    std::vector<DecayPoint> points;
    std::optional<double> slope;
    std::optional<double> intercept;
    std::optional<double> slope_stderr;
    bool dropped_zero = false; // some zero-count entries were left out
    bool all_zero = false;     // every exceedance frequency vanished
};

/// Least-squares fit of log P(|kappa(Y_n)/n - lambda_mu| > eps) against n.
/// One walk per sample with checkpoints at n_list.
DecayFit ldp_decay_fit(const WalkConfig& cfg, const ChamberVector& lambda_mu, double eps, std::span<const int> n_list);

struct MgfEstimate {
    std::vector<PlaneVector> thetas;
    std::vector<double> lambda_hat;
    int n = 0;
    std::size_t samples = 0;
};

/// (1/n) log mean exp(<theta, kappa(Y_n)>), computed with a max shift.
MgfEstimate log_mgf_estimate(const WalkConfig& cfg, std::span<const PlaneVector> thetas);

/// Dual vectors on a regular grid of [-radius, radius]^(d-1) in an
/// orthonormal basis of the trace-zero hyperplane.  For d = 2 the grid lies
/// along (1, -1) / sqrt(2).
std::vector<PlaneVector> theta_grid(int d, double radius, int per_axis);

/// max over the theta grid of <theta, x> - lambda_hat(theta); a finite grid
/// gives a lower bound of the true conjugate.
std::vector<double> legendre_transform(const MgfEstimate& mgf, std::span<const PlaneVector> xs);

struct DefectStats {
    std::size_t pairs = 0;
    std::size_t lox_pairs = 0;
    double max_defect_all = 0.0;
    double max_defect_lox = 0.0; // 0 when no loxodromic pair was seen
    std::vector<double> bin_edges;
    std::vector<std::size_t> histogram_all;
    std::vector<std::size_t> histogram_lox;
};

/// |kappa(gh) - kappa(g) - kappa(h)|.
double additivity_defect(const ScaledProduct& g, const ScaledProduct& h);
double additivity_defect(const UnimodularMatrix& g, const UnimodularMatrix& h);

/// Defects over uniformly random word pairs of length word_len, overall and
/// restricted to pairs with g, h and gh all (r, eps)-loxodromic.
DefectStats additivity_defect_stats(const MatrixSet& set, std::size_t pair_samples, int word_len, double r,
                                    double eps, std::uint64_t seed, int bins = 20);

struct AmsResult {
    std::size_t samples = 0;
    std::size_t fixed = 0;
    double fraction_fixed = 0.0;
    std::vector<Word> failures; // at most 32 kept
};

/// Fraction of random words gamma of length word_len for which gamma * f is
/// (r, eps)-loxodromic for some f in `fixers`.
AmsResult ams_loxodromy_search(const MatrixSet& set, const MatrixSet& fixers, int word_len, std::size_t samples,
                               double r, double eps, std::uint64_t seed);

/// Words of length 1 .. max_len that are (r, eps)-loxodromic themselves.
MatrixSet proximal_words(const MatrixSet& set, int max_len, double r, double eps);

} // namespace jspec
