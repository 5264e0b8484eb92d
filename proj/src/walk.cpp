#include "jspec/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jspec/parallel.hpp"
#include "jspec/rng.hpp"

namespace jspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kChunks = 64;

// samples x checkpoints x d table of raw projections (not divided by m).
struct WalkTable {
    std::size_t samples = 0;
    std::size_t stops = 0;
    std::size_t d = 0;
    std::vector<double> data;

    std::span<const double> at(std::size_t s, std::size_t c) const {
        return {data.data() + (s * stops + c) * d, d};
    }
};

void walk_into(const MatrixSet& set, std::span<const double> cumulative, std::span<const int> stops,
               std::uint64_t seed, std::uint64_t walker, Projection projection, std::span<double> out) {
    Stream stream(derive_seed(seed, walker));
    ScaledProduct y(set.dim());
    const auto d = static_cast<std::size_t>(set.dim());
    std::size_t next = 0;
    for (int step = 1; next < stops.size(); ++step) {
        const std::size_t letter = stream.pick(cumulative);
        try {
            y.multiply_left(set.compounds()[letter]);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (walker " + std::to_string(walker) + ", step " +
                                      std::to_string(step) + ")");
        }
        if (step == stops[next]) {
            const auto v = projection == Projection::Kappa ? y.cartan() : y.jordan();
            std::copy(v.coords().begin(), v.coords().end(), out.begin() + static_cast<std::ptrdiff_t>(next * d));
            ++next;
        }
    }
}

WalkTable sample_walks(const WalkConfig& cfg, std::span<const int> stops, Projection projection) {
    WalkTable table;
    table.samples = cfg.samples;
    table.stops = stops.size();
    table.d = static_cast<std::size_t>(cfg.set.dim());
    table.data.assign(table.samples * table.stops * table.d, 0.0);
    const auto probs = cfg.set.probabilities();
    const auto cumulative = cumulative_weights(probs);
    const std::size_t row = table.stops * table.d;
    parallel_chunks(cfg.samples, kChunks, cfg.workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t s = begin; s < end; ++s) {
            walk_into(cfg.set, cumulative, stops, cfg.seed, s, projection,
                      std::span<double>(table.data.data() + s * row, row));
        }
    });
    return table;
}

} // namespace

void WalkConfig::validate() const {
    if (n < 1) {
        throw Error(ErrorKind::InvalidArgument, "walk length must be at least 1");
    }
    if (samples < 1) {
        throw Error(ErrorKind::InvalidArgument, "need at least one sample");
    }
    int previous = 0;
    for (int c : checkpoints) {
        if (c <= previous || c > n) {
            throw Error(ErrorKind::InvalidArgument, "checkpoints must be increasing and within 1..n");
        }
        previous = c;
    }
}

std::vector<int> WalkConfig::effective_checkpoints() const {
    return checkpoints.empty() ? std::vector<int>{n} : checkpoints;
}

std::vector<ChamberVector> run_walk(const WalkConfig& cfg, std::uint64_t walker_id, Projection projection) {
    cfg.validate();
    const auto stops = cfg.effective_checkpoints();
    const auto d = static_cast<std::size_t>(cfg.set.dim());
    std::vector<double> raw(stops.size() * d);
    const auto probs = cfg.set.probabilities();
    walk_into(cfg.set, cumulative_weights(probs), stops, cfg.seed, walker_id, projection, raw);
    std::vector<ChamberVector> out;
    for (std::size_t c = 0; c < stops.size(); ++c) {
        std::vector<double> v(raw.begin() + static_cast<std::ptrdiff_t>(c * d),
                              raw.begin() + static_cast<std::ptrdiff_t>((c + 1) * d));
        for (double& x : v) {
            x /= stops[c];
        }
        out.push_back(ChamberVector::project(std::move(v)));
    }
    return out;
}

// ---------------------------------------------------------------------------

double LyapunovEstimate::stderr_norm() const { return norm(std_error); }

LyapunovEstimate lyapunov_estimate(const WalkConfig& cfg) {
    cfg.validate();
    const std::vector<int> stops{cfg.n};
    const auto table = sample_walks(cfg, stops, Projection::Kappa);
    const std::size_t d = table.d;
    std::vector<double> mean(d, 0.0);
    for (std::size_t s = 0; s < table.samples; ++s) {
        const auto v = table.at(s, 0);
        for (std::size_t i = 0; i < d; ++i) {
            mean[i] += v[i] / cfg.n;
        }
    }
    const double count = static_cast<double>(table.samples);
    for (double& m : mean) {
        m /= count;
    }
    std::vector<double> err(d, 0.0);
    if (table.samples > 1) {
        for (std::size_t s = 0; s < table.samples; ++s) {
            const auto v = table.at(s, 0);
            for (std::size_t i = 0; i < d; ++i) {
                const double dev = v[i] / cfg.n - mean[i];
                err[i] += dev * dev;
            }
        }
        for (double& e : err) {
            e = std::sqrt(e / (count - 1.0) / count);
        }
    }
    return {ChamberVector::project(std::move(mean)), std::move(err)};
}

// ---------------------------------------------------------------------------
// Grids

std::size_t GridSpec::cell_count() const {
    std::size_t total = 1;
    for (int c : cells) {
        total *= static_cast<std::size_t>(c);
    }
    return total;
}

double GridSpec::width(int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    return (hi[a] - lo[a]) / cells[a];
}

double GridSpec::cell_diagonal() const {
    double sq = 0.0;
    double sum = 0.0;
    for (int a = 0; a < axes(); ++a) {
        sq += width(a) * width(a);
        sum += width(a);
    }
    return std::sqrt(sq + sum * sum);
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
    std::vector<int> index(cells.size());
    for (std::size_t a = cells.size(); a-- > 0;) {
        index[a] = static_cast<int>(flat % static_cast<std::size_t>(cells[a]));
        flat /= static_cast<std::size_t>(cells[a]);
    }
    return index;
}

std::size_t GridSpec::flatten(std::span<const int> index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < cells.size(); ++a) {
        flat = flat * static_cast<std::size_t>(cells[a]) + static_cast<std::size_t>(index[a]);
    }
    return flat;
}

PlaneVector GridSpec::cell_center(std::size_t flat) const {
    const auto index = unflatten(flat);
    PlaneVector x(cells.size() + 1, 0.0);
    double sum = 0.0;
    for (int a = 0; a < axes(); ++a) {
        const auto ua = static_cast<std::size_t>(a);
        x[ua] = lo[ua] + (index[ua] + 0.5) * width(a);
        sum += x[ua];
    }
    x.back() = -sum;
    return x;
}

std::optional<std::size_t> GridSpec::locate(std::span<const double> x) const {
    std::vector<int> index(cells.size());
    for (int a = 0; a < axes(); ++a) {
        const auto ua = static_cast<std::size_t>(a);
        if (x[ua] < lo[ua] || x[ua] > hi[ua]) {
            return std::nullopt;
        }
        index[ua] = std::min(cells[ua] - 1, static_cast<int>(std::floor((x[ua] - lo[ua]) / width(a))));
    }
    return flatten(index);
}

namespace {

void check_grid(const GridSpec& grid, int d) {
    const auto axes = static_cast<std::size_t>(d - 1);
    if (grid.lo.size() != axes || grid.hi.size() != axes || grid.cells.size() != axes) {
        throw Error(ErrorKind::InvalidArgument, "grid needs " + std::to_string(axes) + " axes");
    }
    for (std::size_t a = 0; a < axes; ++a) {
        if (grid.cells[a] < 1 || !(grid.hi[a] > grid.lo[a])) {
            throw Error(ErrorKind::InvalidArgument, "grid axis " + std::to_string(a) + " is empty");
        }
    }
}

} // namespace

RateGrid rate_function_estimate(const WalkConfig& cfg, const GridSpec& grid, Projection projection) {
    cfg.validate();
    check_grid(grid, cfg.set.dim());
    const std::vector<int> stops{cfg.n};
    const auto table = sample_walks(cfg, stops, projection);

    RateGrid out;
    out.grid = grid;
    out.n = cfg.n;
    out.samples = cfg.samples;
    out.counts.assign(grid.cell_count(), 0);
    std::vector<double> x(table.d);
    for (std::size_t s = 0; s < table.samples; ++s) {
        const auto v = table.at(s, 0);
        for (std::size_t i = 0; i < table.d; ++i) {
            x[i] = v[i] / cfg.n;
        }
        if (const auto cell = grid.locate(x)) {
            ++out.counts[*cell];
        } else {
            ++out.outside;
        }
    }
    const double samples = static_cast<double>(cfg.samples);
    out.i_hat.resize(out.counts.size());
    double best = kInf;
    for (std::size_t c = 0; c < out.counts.size(); ++c) {
        out.i_hat[c] = out.counts[c] > 0 ? -std::log(static_cast<double>(out.counts[c]) / samples) / cfg.n : kInf;
        if (out.i_hat[c] < best) {
            best = out.i_hat[c];
            out.argmin = c;
        }
    }
    out.noise_floor = std::log(samples) / cfg.n;
    return out;
}

// ---------------------------------------------------------------------------

DecayFit ldp_decay_fit(const WalkConfig& cfg, const ChamberVector& lambda_mu, double eps, std::span<const int> n_list) {
    if (n_list.size() < 3) {
        throw Error(ErrorKind::InvalidArgument, "decay fit needs at least three walk lengths");
    }
    if (!(eps > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    }
    if (lambda_mu.dim() != static_cast<std::size_t>(cfg.set.dim())) {
        throw Error(ErrorKind::DimMismatch, "Lyapunov vector dimension differs from the matrix set");
    }
    WalkConfig run = cfg;
    run.n = n_list.back();
    run.checkpoints.assign(n_list.begin(), n_list.end());
    run.validate();
    const auto table = sample_walks(run, run.checkpoints, Projection::Kappa);

    DecayFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t c = 0; c < n_list.size(); ++c) {
        DecayPoint pt;
        pt.n = n_list[c];
        for (std::size_t s = 0; s < table.samples; ++s) {
            const auto v = table.at(s, c);
            double sq = 0.0;
            for (std::size_t i = 0; i < table.d; ++i) {
                const double dev = v[i] / pt.n - lambda_mu[i];
                sq += dev * dev;
            }
            if (std::sqrt(sq) > eps) {
                ++pt.count;
            }
        }
        pt.phat = static_cast<double>(pt.count) / static_cast<double>(table.samples);
        pt.log_phat = pt.count > 0 ? std::log(pt.phat) : -kInf;
        pt.used = pt.count > 0;
        if (pt.used) {
            xs.push_back(pt.n);
            ys.push_back(pt.log_phat);
        } else {
            fit.dropped_zero = true;
        }
        fit.points.push_back(pt);
    }
    fit.all_zero = xs.empty();
    if (xs.size() >= 2) {
        const double m = static_cast<double>(xs.size());
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i] / m;
            my += ys[i] / m;
        }
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        fit.slope = sxy / sxx;
        fit.intercept = my - *fit.slope * mx;
        if (xs.size() >= 3) {
            double rss = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double r = ys[i] - (*fit.intercept + *fit.slope * xs[i]);
                rss += r * r;
            }
            fit.slope_stderr = std::sqrt(rss / (m - 2.0) / sxx);
        }
    }
    return fit;
}

// ---------------------------------------------------------------------------

MgfEstimate log_mgf_estimate(const WalkConfig& cfg, std::span<const PlaneVector> thetas) {
    cfg.validate();
    for (const auto& t : thetas) {
        if (t.size() != static_cast<std::size_t>(cfg.set.dim())) {
            throw Error(ErrorKind::DimMismatch, "theta dimension differs from the matrix set");
        }
        if (!std::all_of(t.begin(), t.end(), [](double v) { return std::isfinite(v); })) {
            throw Error(ErrorKind::InvalidArgument, "theta must be finite");
        }
    }
    const std::vector<int> stops{cfg.n};
    const auto table = sample_walks(cfg, stops, Projection::Kappa);

    MgfEstimate out;
    out.thetas.assign(thetas.begin(), thetas.end());
    out.n = cfg.n;
    out.samples = cfg.samples;
    std::vector<double> values(table.samples);
    for (const auto& theta : thetas) {
        if (std::all_of(theta.begin(), theta.end(), [](double v) { return v == 0.0; })) {
            out.lambda_hat.push_back(0.0);
            continue;
        }
        double peak = -kInf;
        for (std::size_t s = 0; s < table.samples; ++s) {
            values[s] = dot(theta, table.at(s, 0));
            peak = std::max(peak, values[s]);
        }
        double sum = 0.0;
        for (double v : values) {
            sum += std::exp(v - peak);
        }
        out.lambda_hat.push_back((peak + std::log(sum / static_cast<double>(table.samples))) / cfg.n);
    }
    return out;
}

std::vector<PlaneVector> theta_grid(int d, double radius, int per_axis) {
    if (per_axis < 1 || !(radius >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "theta grid needs per_axis >= 1 and radius >= 0");
    }
    const auto basis = hyperplane_basis(d);
    const auto axes = basis.size();
    std::size_t total = 1;
    for (std::size_t a = 0; a < axes; ++a) {
        total *= static_cast<std::size_t>(per_axis);
    }
    const auto coordinate = [&](int i) {
        return per_axis == 1 ? 0.0 : -radius + 2.0 * radius * i / (per_axis - 1);
    };
    std::vector<PlaneVector> out;
    out.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        PlaneVector theta(static_cast<std::size_t>(d), 0.0);
        std::size_t rest = flat;
        for (std::size_t a = 0; a < axes; ++a) {
            const double c = coordinate(static_cast<int>(rest % static_cast<std::size_t>(per_axis)));
            rest /= static_cast<std::size_t>(per_axis);
            for (std::size_t i = 0; i < theta.size(); ++i) {
                theta[i] += c * basis[a][i];
            }
        }
        out.push_back(std::move(theta));
    }
    return out;
}

std::vector<double> legendre_transform(const MgfEstimate& mgf, std::span<const PlaneVector> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        double best = -kInf;
        for (std::size_t t = 0; t < mgf.thetas.size(); ++t) {
            best = std::max(best, dot(mgf.thetas[t], x) - mgf.lambda_hat[t]);
        }
        out.push_back(best);
    }
    return out;
}

// ---------------------------------------------------------------------------

double additivity_defect(const ScaledProduct& g, const ScaledProduct& h) {
    ScaledProduct gh = g;
    gh.multiply_right(h);
    const auto a = gh.cartan();
    const auto b = g.cartan();
    const auto c = h.cartan();
    double sq = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double diff = a[i] - b[i] - c[i];
        sq += diff * diff;
    }
    return std::sqrt(sq);
}

double additivity_defect(const UnimodularMatrix& g, const UnimodularMatrix& h) {
    return additivity_defect(ScaledProduct(CompoundGenerator::from(g)), ScaledProduct(CompoundGenerator::from(h)));
}

namespace {

Word random_word(Stream& stream, std::size_t letters, int length) {
    Word w(static_cast<std::size_t>(length));
    for (auto& letter : w) {
        letter = stream.below(letters);
    }
    return w;
}

bool loxodromic(const ScaledProduct& p, double r, double eps) {
    return proximality_report(p.compounds(), r, eps).loxodromic;
}

} // namespace

DefectStats additivity_defect_stats(const MatrixSet& set, std::size_t pair_samples, int word_len, double r,
                                    double eps, std::uint64_t seed, int bins) {
    if (word_len < 1 || bins < 1) {
        throw Error(ErrorKind::InvalidArgument, "need word_len >= 1 and bins >= 1");
    }
    std::vector<double> all;
    std::vector<double> lox;
    for (std::size_t i = 0; i < pair_samples; ++i) {
        Stream stream(derive_seed(seed, i));
        const auto g = set.product(random_word(stream, set.size(), word_len));
        const auto h = set.product(random_word(stream, set.size(), word_len));
        const double defect = additivity_defect(g, h);
        all.push_back(defect);
        ScaledProduct gh = g;
        gh.multiply_right(h);
        if (loxodromic(g, r, eps) && loxodromic(h, r, eps) && loxodromic(gh, r, eps)) {
            lox.push_back(defect);
        }
    }
    DefectStats stats;
    stats.pairs = all.size();
    stats.lox_pairs = lox.size();
    for (double v : all) {
        stats.max_defect_all = std::max(stats.max_defect_all, v);
    }
    for (double v : lox) {
        stats.max_defect_lox = std::max(stats.max_defect_lox, v);
    }
    const double top = std::max(stats.max_defect_all, 1e-12);
    for (int b = 0; b <= bins; ++b) {
        stats.bin_edges.push_back(top * b / bins);
    }
    const auto bin_of = [&](double v) {
        return static_cast<std::size_t>(std::min(bins - 1, static_cast<int>(v / top * bins)));
    };
    stats.histogram_all.assign(static_cast<std::size_t>(bins), 0);
    stats.histogram_lox.assign(static_cast<std::size_t>(bins), 0);
    for (double v : all) {
        ++stats.histogram_all[bin_of(v)];
    }
    for (double v : lox) {
        ++stats.histogram_lox[bin_of(v)];
    }
    return stats;
}

AmsResult ams_loxodromy_search(const MatrixSet& set, const MatrixSet& fixers, int word_len, std::size_t samples,
                               double r, double eps, std::uint64_t seed) {
    if (fixers.dim() != set.dim()) {
        throw Error(ErrorKind::DimMismatch, "fixing set has another dimension");
    }
    if (word_len < 1) {
        throw Error(ErrorKind::InvalidArgument, "word_len must be at least 1");
    }
    AmsResult out;
    out.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        Stream stream(derive_seed(seed, i));
        const auto word = random_word(stream, set.size(), word_len);
        const auto gamma = set.product(word);
        bool fixed = false;
        for (const auto& f : fixers.compounds()) {
            ScaledProduct p = gamma;
            p.multiply_right(f);
            if (loxodromic(p, r, eps)) {
                fixed = true;
                break;
            }
        }
        if (fixed) {
            ++out.fixed;
        } else if (out.failures.size() < 32) {
            out.failures.push_back(word);
        }
    }
    out.fraction_fixed = samples ? static_cast<double>(out.fixed) / static_cast<double>(samples) : 0.0;
    return out;
}

MatrixSet proximal_words(const MatrixSet& set, int max_len, double r, double eps) {
    std::vector<Word> recipes;
    for (int len = 1; len <= max_len; ++len) {
        EnumerationOptions opts;
        opts.budget = std::numeric_limits<std::size_t>::max();
        enumerate_products(set, len, opts, [&](std::span<const std::size_t> w, const ScaledProduct& p) {
            if (loxodromic(p, r, eps)) {
                recipes.emplace_back(w.begin(), w.end());
            }
        });
    }
    if (recipes.empty()) {
        throw Error(ErrorKind::EmptyInput, "no loxodromic word up to the requested length");
    }
    return set.with_words(recipes, false);
}

} // namespace jspec
