#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include "jspec/io.hpp"
#include "jspec/jsr.hpp"
#include "jspec/rng.hpp"
#include "jspec/version.hpp"
#include "jspec/walk.hpp"

namespace jspec::app {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, what);
}

// Parameters accepted per command, beyond seed and workers which every
// command takes.
const std::map<std::string, std::vector<std::string>>& param_matrix() {
    static const std::map<std::string, std::vector<std::string>> m = {
        {"spectrum", {"n", "dirs", "budget"}},
        {"jsr", {"depth", "prune_delta"}},
        {"bergerwang", {"n", "depth", "dirs", "budget", "prune_delta", "k"}},
        {"lyapunov", {"n", "samples", "projection"}},
        {"rate", {"n", "samples", "grid", "projection"}},
        {"mgf", {"n", "samples", "grid", "theta_radius", "theta_points"}},
        {"decay", {"eps", "n_list", "samples", "mu_n", "mu_samples"}},
        {"proximal", {"n", "r", "eps", "budget"}},
        {"defect", {"word_len", "samples", "r", "eps"}},
        {"ams", {"word_len", "samples", "r", "eps", "fix_len"}},
        {"cone", {"n_list", "extend", "dirs", "budget"}},
    };
    return m;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        invalid("cannot parse '" + s + "' in " + what);
    }
    return v;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const auto& part : split(s, ',')) {
        out.push_back(parse_number<int>(part, what));
    }
    return out;
}

// "0.1,1.1.0" -> {{0,1},{1,1,0}}
std::vector<Word> parse_words(const std::string& s) {
    std::vector<Word> out;
    for (const auto& w : split(s, ',')) {
        Word word;
        for (const auto& letter : split(w, '.')) {
            word.push_back(parse_number<std::size_t>(letter, "word list"));
        }
        out.push_back(std::move(word));
    }
    return out;
}

GridSpec parse_grid(const std::string& s, int d) {
    GridSpec g;
    for (const auto& axis : split(s, ';')) {
        const auto parts = split(axis, ',');
        if (parts.size() != 3) {
            invalid("grid axis '" + axis + "' is not lo,hi,cells");
        }
        g.lo.push_back(parse_number<double>(parts[0], "grid"));
        g.hi.push_back(parse_number<double>(parts[1], "grid"));
        g.cells.push_back(parse_number<int>(parts[2], "grid"));
        if (!(g.lo.back() < g.hi.back()) || g.cells.back() < 1) {
            invalid("grid axis '" + axis + "' is empty");
        }
    }
    if (g.axes() != d - 1) {
        throw Error(ErrorKind::DimMismatch,
                    "grid has " + std::to_string(g.axes()) + " axes, expected " + std::to_string(d - 1));
    }
    return g;
}

// Axis 1 covers [0, M] and the others [-M, M], M the largest log-norm of a
// generator or its inverse; every kappa(Y_n)/n lands inside.
std::string auto_grid(const MatrixSet& set) {
    double m = 0.0;
    for (const auto& g : set.generators()) {
        const auto k = cartan_projection(g);
        m = std::max({m, k[0], -k[k.dim() - 1]});
    }
    m = std::max(m, 1e-3);
    std::string out;
    for (int a = 0; a < set.dim() - 1; ++a) {
        if (a > 0) {
            out += ';';
        }
        out += format_number(a == 0 ? 0.0 : -m) + "," + format_number(m) + ",20";
    }
    return out;
}

json default_param(const std::string& command, const std::string& name, const MatrixSet& set) {
    const int d = set.dim();
    if (name == "n") {
        if (command == "lyapunov") {
            return 1000;
        }
        if (command == "rate" || command == "mgf") {
            return 60;
        }
        if (command == "proximal") {
            return 3;
        }
        return 12;
    }
    if (name == "depth") return 14;
    if (name == "dirs") return DirectionSet::default_resolution(d);
    if (name == "budget") return kDefaultBudget;
    if (name == "prune_delta") return kDefaultPruneDelta;
    if (name == "k") return 0; // every fundamental representation
    if (name == "samples") return 10'000;
    if (name == "projection") return "kappa";
    if (name == "grid") return auto_grid(set);
    if (name == "theta_radius") return 6.0;
    if (name == "theta_points") return d == 2 ? 241 : 41;
    if (name == "eps") return command == "decay" ? 0.15 : 0.2;
    if (name == "r") return 0.05;
    if (name == "n_list") return command == "cone" ? "12,14" : "50,100,200,400";
    if (name == "mu_n") return 4000;
    if (name == "mu_samples") return 200;
    if (name == "word_len") return command == "ams" ? "15" : "5,10,20";
    if (name == "fix_len") return 3;
    if (name == "extend") return "0.1";
    invalid("no default for " + name);
}

std::string timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row_strings(header); }

    Csv& cell(const std::string& s) {
        line_.push_back(s);
        return *this;
    }
    Csv& cell(double v) { return cell(format_number(v)); }
    Csv& cell(std::size_t v) { return cell(std::to_string(v)); }
    Csv& cell(int v) { return cell(std::to_string(v)); }
    Csv& cells(std::span<const double> vs) {
        for (double v : vs) {
            cell(v);
        }
        return *this;
    }
    void end() {
        row_strings(line_);
        line_.clear();
    }
    const std::string& str() const { return out_; }

private:
    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ += (i ? "," : "") + cells[i];
        }
        out_ += '\n';
    }

    std::vector<std::string> line_;
    std::string out_;
};

std::vector<std::string> coord_header(const std::string& prefix, int d) {
    std::vector<std::string> h;
    for (int i = 1; i <= d; ++i) {
        h.push_back(prefix + std::to_string(i));
    }
    return h;
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

json json_vector(std::span<const double> v) {
    auto j = json::array();
    for (double x : v) {
        j.push_back(json_number(x));
    }
    return j;
}

// Everything a command produces, written only after it succeeded.
using Outputs = std::vector<std::pair<std::string, std::string>>;

struct Context {
    const MatrixSet& set;
    const json& p;
    std::uint64_t seed;
    unsigned workers;

    int i(const char* k) const { return p.at(k).get<int>(); }
    double x(const char* k) const { return p.at(k).get<double>(); }
    std::size_t z(const char* k) const { return p.at(k).get<std::size_t>(); }
    std::string s(const char* k) const { return p.at(k).get<std::string>(); }

    EnumerationOptions enumeration() const { return {z("budget"), seed, workers}; }
    WalkConfig walk(int n, std::size_t samples) const {
        WalkConfig cfg{set, n, samples, seed, {}, workers};
        cfg.validate();
        return cfg;
    }
    Projection projection() const {
        const auto v = s("projection");
        if (v == "kappa") return Projection::Kappa;
        if (v == "lambda") return Projection::Lambda;
        invalid("projection must be kappa or lambda, got " + v);
    }
};

Outputs cmd_spectrum(const Context& c, json& summary) {
    const auto dirs = DirectionSet::make(c.set.dim(), c.i("dirs"), c.seed);
    const auto levels = joint_spectrum_estimate(c.set, c.i("n"), dirs, c.enumeration());
    Csv csv({"n", "product_count", "mode", "d_kl", "d_step"});
    for (const auto& e : levels) {
        csv.cell(e.n).cell(e.product_count).cell(std::string(to_string(e.mode))).cell(e.d_kl).cell(e.d_step).end();
    }
    const auto& last = levels.back();
    summary = {{"d_kl", json_number(last.d_kl)}, {"d_step", json_number(last.d_step)},
               {"mode", to_string(last.mode)}};
    return {{"spectrum.csv", csv.str()},
            {"body.json", to_json(last.kappa_body).dump(2) + "\n"},
            {"lambda_body.json", to_json(last.lambda_body).dump(2) + "\n"}};
}

Outputs cmd_jsr(const Context& c, json& summary) {
    std::vector<Matrix> mats;
    for (const auto& g : c.set.generators()) {
        mats.push_back(g.entries());
    }
    const auto b = jsr_bounds(mats, c.i("depth"), c.x("prune_delta"));
    Csv csv({"depth", "explored", "frontier", "lower", "upper", "witness"});
    for (const auto& l : b.levels) {
        csv.cell(l.depth).cell(l.explored).cell(l.frontier).cell(l.lower).cell(l.upper).cell(format_word(l.witness)).end();
    }
    summary = {{"lower", json_number(b.lower)}, {"upper", json_number(b.upper)}, {"witness", format_word(b.witness)}};
    return {{"bounds.csv", csv.str()}};
}

Outputs cmd_bergerwang(const Context& c, json& summary) {
    const int d = c.set.dim();
    const auto dirs = DirectionSet::make(d, c.i("dirs"), c.seed);
    std::vector<int> ks;
    if (c.i("k") == 0) {
        for (int k = 1; k < d; ++k) ks.push_back(k);
    } else {
        ks.push_back(c.i("k"));
    }
    // validate k before the expensive enumeration
    for (int k : ks) {
        if (k < 1 || k > d - 1) {
            throw Error(ErrorKind::BadIndex, "k = " + std::to_string(k) + " outside 1.." + std::to_string(d - 1));
        }
    }
    const auto spectrum = joint_spectrum_estimate(c.set, c.i("n"), dirs, c.enumeration()).back();
    Csv csv({"k", "n", "depth", "lhs", "lower", "upper", "rhs", "gap", "witness"});
    summary = json::array();
    for (int k : ks) {
        const auto r = berger_wang_check(c.set, k, c.i("depth"), spectrum, c.x("prune_delta"));
        csv.cell(k).cell(spectrum.n).cell(c.i("depth")).cell(r.lhs).cell(r.lower).cell(r.upper).cell(r.rhs).cell(r.gap);
        csv.cell(format_word(r.bounds.witness)).end();
        summary.push_back({{"k", k}, {"gap", json_number(r.gap)}});
    }
    return {{"bergerwang.csv", csv.str()}};
}

Outputs cmd_lyapunov(const Context& c, json& summary) {
    const auto cfg = c.walk(c.i("n"), c.z("samples"));
    const int d = c.set.dim();
    Csv csv({"coordinate", "value", "stderr"});
    LyapunovEstimate est;
    if (c.projection() == Projection::Kappa) {
        est = lyapunov_estimate(cfg);
    } else {
        // mean of lambda(Y_n)/n; same estimator with the other projection
        std::vector<double> sum(static_cast<std::size_t>(d), 0.0), sq(sum);
        for (std::size_t w = 0; w < cfg.samples; ++w) {
            const auto v = run_walk(cfg, w, Projection::Lambda).back();
            for (std::size_t i = 0; i < v.dim(); ++i) {
                sum[i] += v[i];
                sq[i] += v[i] * v[i];
            }
        }
        const double s = static_cast<double>(cfg.samples);
        std::vector<double> mean(sum.size());
        est.std_error.resize(sum.size());
        for (std::size_t i = 0; i < sum.size(); ++i) {
            mean[i] = sum[i] / s;
            const double var = s > 1 ? std::max(0.0, (sq[i] - s * mean[i] * mean[i]) / (s - 1)) : 0.0;
            est.std_error[i] = std::sqrt(var / s);
        }
        est.vec = ChamberVector::project(mean);
    }
    for (int i = 0; i < d; ++i) {
        const auto u = static_cast<std::size_t>(i);
        csv.cell(i + 1).cell(est.vec[u]).cell(est.std_error[u]).end();
    }
    summary = {{"vec", json_vector(est.vec.span())}, {"stderr_norm", json_number(est.stderr_norm())}};
    return {{"lyapunov.csv", csv.str()}};
}

Outputs cmd_rate(const Context& c, json& summary) {
    const int d = c.set.dim();
    const auto grid = parse_grid(c.s("grid"), d);
    const auto rg = rate_function_estimate(c.walk(c.i("n"), c.z("samples")), grid, c.projection());
    Csv csv(coord_header("x", d) + std::vector<std::string>{"count", "i_hat"});
    for (std::size_t j = 0; j < grid.cell_count(); ++j) {
        csv.cells(grid.cell_center(j)).cell(rg.counts[j]).cell(rg.i_hat[j]).end();
    }
    json doc = {{"n", rg.n},
                {"samples", rg.samples},
                {"projection", c.s("projection")},
                {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"cells", grid.cells}}},
                {"noise_floor", json_number(rg.noise_floor)},
                {"outside", rg.outside},
                {"argmin", rg.argmin},
                {"argmin_center", json_vector(grid.cell_center(rg.argmin))},
                {"argmin_i_hat", json_number(rg.i_hat[rg.argmin])},
                {"counts", rg.counts},
                {"i_hat", json_vector(rg.i_hat)}};
    summary = {{"argmin_center", doc["argmin_center"]}, {"argmin_i_hat", doc["argmin_i_hat"]},
               {"noise_floor", doc["noise_floor"]}};
    return {{"rate.csv", csv.str()}, {"rate.json", doc.dump(2) + "\n"}};
}

Outputs cmd_mgf(const Context& c, json& summary) {
    const int d = c.set.dim();
    const auto grid = parse_grid(c.s("grid"), d);
    const auto thetas = theta_grid(d, c.x("theta_radius"), c.i("theta_points"));
    const auto est = log_mgf_estimate(c.walk(c.i("n"), c.z("samples")), thetas);
    Csv mgf(coord_header("theta", d) + std::vector<std::string>{"lambda_hat"});
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        mgf.cells(thetas[t]).cell(est.lambda_hat[t]).end();
    }
    std::vector<PlaneVector> xs;
    for (std::size_t j = 0; j < grid.cell_count(); ++j) {
        xs.push_back(grid.cell_center(j));
    }
    const auto istar = legendre_transform(est, xs);
    Csv leg(coord_header("x", d) + std::vector<std::string>{"i_star"});
    for (std::size_t j = 0; j < xs.size(); ++j) {
        leg.cells(xs[j]).cell(istar[j]).end();
    }
    summary = {{"thetas", thetas.size()}, {"points", xs.size()}};
    return {{"mgf.csv", mgf.str()}, {"legendre.csv", leg.str()}};
}

Outputs cmd_decay(const Context& c, json& summary) {
    const auto n_list = parse_int_list(c.s("n_list"), "n_list");
    if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end())) {
        invalid("n_list must be increasing");
    }
    auto mu_cfg = c.walk(c.i("mu_n"), c.z("mu_samples"));
    mu_cfg.seed = derive_seed(c.seed, 0x6c79617075ULL); // independent of the decay walkers
    const auto mu = lyapunov_estimate(mu_cfg);
    const auto fit = ldp_decay_fit(c.walk(n_list.back(), c.z("samples")), mu.vec, c.x("eps"), n_list);
    Csv csv({"n", "count", "log_phat"});
    for (const auto& pt : fit.points) {
        csv.cell(pt.n).cell(pt.count).cell(pt.log_phat).end();
    }
    const auto opt = [](const std::optional<double>& v) { return v ? json_number(*v) : json(nullptr); };
    json doc = {{"eps", c.x("eps")},
                {"lambda_mu", json_vector(mu.vec.span())},
                {"lambda_mu_stderr", json_vector(mu.std_error)},
                {"slope", opt(fit.slope)},
                {"intercept", opt(fit.intercept)},
                {"slope_stderr", opt(fit.slope_stderr)},
                {"dropped_zero", fit.dropped_zero},
                {"all_zero", fit.all_zero}};
    summary = {{"slope", doc["slope"]}, {"all_zero", fit.all_zero}};
    return {{"decay.csv", csv.str()}, {"decay.json", doc.dump(2) + "\n"}};
}

Outputs cmd_proximal(const Context& c, json& summary) {
    const int max_len = c.i("n");
    if (max_len < 1) {
        invalid("n must be at least 1");
    }
    double total = 0.0;
    for (int l = 1; l <= max_len; ++l) {
        total += std::pow(static_cast<double>(c.set.size()), l);
    }
    if (total > static_cast<double>(c.z("budget"))) {
        invalid("too many words up to length " + std::to_string(max_len) + " for the budget");
    }
    Csv csv({"word", "k", "sv_ratio", "eigen_gap", "top_evec_distance", "degenerate", "eps_proximal",
             "r_eps_proximal", "loxodromic"});
    std::size_t words = 0, lox = 0;
    const auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
    EnumerationOptions opts{std::numeric_limits<std::size_t>::max(), c.seed, 1};
    for (int l = 1; l <= max_len; ++l) {
        enumerate_products(c.set, l, opts, [&](std::span<const std::size_t> w, const ScaledProduct& p) {
            const auto rep = proximality_report(p.compounds(), c.x("r"), c.x("eps"));
            ++words;
            lox += rep.loxodromic ? 1 : 0;
            for (const auto& q : rep.per_rep) {
                csv.cell(format_word(w)).cell(q.k).cell(q.sv_ratio).cell(q.eigen_gap).cell(q.top_evec_distance);
                csv.cell(flag(q.degenerate_spectrum)).cell(flag(q.eps_proximal)).cell(flag(q.r_eps_proximal));
                csv.cell(flag(rep.loxodromic)).end();
            }
        });
    }
    summary = {{"words", words}, {"loxodromic", lox}};
    return {{"proximal.csv", csv.str()}};
}

Outputs cmd_defect(const Context& c, json& summary) {
    const auto lens = parse_int_list(c.s("word_len"), "word_len");
    Csv csv({"word_len", "pairs", "lox_pairs", "max_defect_all", "max_defect_lox"});
    Csv hist({"word_len", "bin_lo", "bin_hi", "count_all", "count_lox"});
    summary = json::array();
    for (int len : lens) {
        const auto s = additivity_defect_stats(c.set, c.z("samples"), len, c.x("r"), c.x("eps"), c.seed);
        csv.cell(len).cell(s.pairs).cell(s.lox_pairs).cell(s.max_defect_all).cell(s.max_defect_lox).end();
        for (std::size_t b = 0; b < s.histogram_all.size(); ++b) {
            hist.cell(len).cell(s.bin_edges[b]).cell(s.bin_edges[b + 1]).cell(s.histogram_all[b]);
            hist.cell(s.histogram_lox[b]).end();
        }
        summary.push_back({{"word_len", len}, {"max_defect_lox", json_number(s.max_defect_lox)}});
    }
    return {{"defect.csv", csv.str()}, {"defect_hist.csv", hist.str()}};
}

Outputs cmd_ams(const Context& c, json& summary) {
    const auto lens = parse_int_list(c.s("word_len"), "word_len");
    if (lens.size() != 1) {
        invalid("ams takes a single word length");
    }
    const auto fixers = proximal_words(c.set, c.i("fix_len"), c.x("r"), c.x("eps"));
    const auto res = ams_loxodromy_search(c.set, fixers, lens[0], c.z("samples"), c.x("r"), c.x("eps"), c.seed);
    json failures = json::array();
    for (const auto& w : res.failures) {
        failures.push_back(format_word(w));
    }
    json doc = {{"word_len", lens[0]},  {"samples", res.samples},           {"fixed", res.fixed},
                {"fraction_fixed", json_number(res.fraction_fixed)}, {"fixers", fixers.labels()},
                {"failures", failures}};
    summary = {{"fraction_fixed", doc["fraction_fixed"]}, {"fixers", fixers.size()}};
    return {{"ams.json", doc.dump(2) + "\n"}};
}

Outputs cmd_cone(const Context& c, json& summary) {
    const auto other = c.set.with_words(parse_words(c.s("extend")), true);
    const auto dirs = DirectionSet::make(c.set.dim(), c.i("dirs"), c.seed);
    Csv csv({"n", "distance"});
    summary = json::array();
    for (int n : parse_int_list(c.s("n_list"), "n_list")) {
        const double dist = cone_invariance_check(c.set, other, n, dirs, c.enumeration());
        csv.cell(n).cell(dist).end();
        summary.push_back({{"n", n}, {"distance", json_number(dist)}});
    }
    return {{"cone.csv", csv.str()}};
}

using Runner = Outputs (*)(const Context&, json&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m = {
        {"spectrum", cmd_spectrum}, {"jsr", cmd_jsr},         {"bergerwang", cmd_bergerwang},
        {"lyapunov", cmd_lyapunov}, {"rate", cmd_rate},       {"mgf", cmd_mgf},
        {"decay", cmd_decay},       {"proximal", cmd_proximal}, {"defect", cmd_defect},
        {"ams", cmd_ams},           {"cone", cmd_cone},
    };
    return m;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
}

} // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : param_matrix()) {
            v.push_back(k);
        }
        return v;
    }();
    return names;
}

nlohmann::json resolve_params(const std::string& command, const nlohmann::json& given, const MatrixSet& set) {
    const auto it = param_matrix().find(command);
    if (it == param_matrix().end()) {
        invalid("unknown command " + command);
    }
    auto names = it->second;
    names.push_back("seed");
    names.push_back("workers");
    for (const auto& [key, _] : given.items()) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            invalid("parameter " + key + " does not apply to " + command);
        }
    }
    json p = json::object();
    for (const auto& name : names) {
        if (given.contains(name)) {
            p[name] = given[name];
        } else if (name == "seed") {
            p[name] = 0;
        } else if (name == "workers") {
            p[name] = std::max(1u, std::thread::hardware_concurrency());
        } else {
            p[name] = default_param(command, name, set);
        }
    }
    if (p.contains("grid") && p["grid"] == "auto") {
        p["grid"] = auto_grid(set);
    }
    return p;
}

ExperimentSpec spec_from_manifest(const nlohmann::json& manifest, const std::filesystem::path& output_dir) {
    ExperimentSpec spec;
    try {
        spec.command = manifest.at("command").get<std::string>();
        spec.params = manifest.at("params");
        spec.input_document = manifest.at("input");
        spec.input_path = manifest.value("input_path", std::string());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("manifest: ") + e.what());
    }
    spec.output_dir = output_dir;
    return spec;
}

int run_experiment(const ExperimentSpec& spec, std::ostream& err) {
    const auto started = std::chrono::system_clock::now();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!runners().contains(spec.command)) {
            invalid("unknown command " + spec.command);
        }
        const json input = spec.input_document.is_null() ? read_json_file(spec.input_path) : spec.input_document;
        const auto set = parse_matrix_set(input.dump());
        json params;
        try {
            params = resolve_params(spec.command, spec.params, set);
            params.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            invalid(std::string("bad parameter type: ") + e.what());
        }
        const Context ctx{set, params, params.at("seed").get<std::uint64_t>(),
                          std::max(1u, params.at("workers").get<unsigned>())};
        json summary;
        Outputs outputs;
        try {
            outputs = runners().at(spec.command)(ctx, summary);
        } catch (const json::exception& e) {
            invalid(std::string("bad parameter type: ") + e.what());
        }

        std::filesystem::create_directories(spec.output_dir);
        json files = json::array();
        for (const auto& [name, content] : outputs) {
            write_file_atomic(spec.output_dir / name, content);
            files.push_back(name);
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest = {{"tool", "jspec"},
                         {"version", std::string(kVersion)},
                         {"command", spec.command},
                         {"params", params},
                         {"input_path", spec.input_path.string()},
                         {"input", input},
                         {"outputs", files},
                         {"summary", summary},
                         {"started", timestamp(started)},
                         {"finished", timestamp(std::chrono::system_clock::now())},
                         {"wall_clock_seconds", wall}};
        write_file_atomic(spec.output_dir / "manifest.json", manifest.dump(2) + "\n");
        return kExitOk;
    } catch (const Error& e) {
        err << "jspec " << spec.command << ": " << e.what() << '\n';
        return e.is_validation() ? kExitValidation : kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "jspec " << spec.command << ": " << e.what() << '\n';
        return kExitValidation;
    }
}

} // namespace jspec::app
