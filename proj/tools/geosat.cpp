// Command-line front end: figure data as CSV plus a JSON run manifest.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geosat/geosat.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{
//---------------------------------------------------------------------------//
enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 2,
    exit_numeric = 3,
    exit_parse = 4,
};

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct NumericFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
struct GlobalOptions
{
    std::uint64_t seed{1};
    std::string out{"."};
    bool strict{false};
    unsigned workers{1};

    long n_sats{100};
    double alpha{3.0};
    double gain_ratio_db{20.0};
    int nakagami_m{1};
    double latitude_deg{37.0};
    double longitude_deg{137.0};
    double eirp_density_dbw_mhz{59.0};
    double g_serving_dbi{51.0};
    double g_terminal_dbi{0.0};
    double carrier_ghz{2.0};
    double bandwidth_mhz{30.0};
    double noise_dbm_hz{-174.0};
    double path_loss_ref_km{1.0};
    double rel_tol{1e-8};
    int max_panels{200};
};

struct Grid
{
    double lo{0};
    double hi{0};
    double step{1};

    std::vector<double> values() const
    {
        std::vector<double> v;
        auto const n = static_cast<long>(std::floor((hi - lo) / step * (1 + 1e-12) + 1e-9));
        for (long k = 0; k <= n; ++k)
            v.push_back(lo + static_cast<double>(k) * step);
        return v;
    }

    std::string text() const
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g:%.17g:%.17g", lo, hi, step);
        return buf;
    }
};

Grid parse_grid(std::string const& spec)
{
    Grid g;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &g.lo, &g.hi, &g.step, &tail) != 3)
        throw ConfigError("grid must be lo:hi:step, got '" + spec + "'");
    if (!(g.step > 0) || !(g.hi >= g.lo) || !std::isfinite(g.lo) || !std::isfinite(g.hi))
        throw ConfigError("grid needs step > 0 and hi >= lo, got '" + spec + "'");
    if ((g.hi - g.lo) / g.step > 1e7)
        throw ConfigError("grid has too many points: '" + spec + "'");
    return g;
}

//---------------------------------------------------------------------------//
std::string num(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string hex_digest(std::string const& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class CsvWriter
{
  public:
    CsvWriter(fs::path path, std::vector<std::string> const& header)
        : path_(std::move(path)), out_(path_, std::ios::binary)
    {
        if (!out_)
            throw ConfigError("cannot write " + path_.string());
        row(header);
    }

    void row(std::vector<std::string> const& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    fs::path const& path() const { return path_; }

  private:
    fs::path path_;
    std::ofstream out_;
};

//---------------------------------------------------------------------------//
struct Run
{
    std::string command;
    GlobalOptions const& opts;
    json config;
    json extra = json::object();
    std::vector<std::string> outputs;
    bool numeric_failure{false};

    fs::path file(std::string const& name)
    {
        fs::path const p = fs::path(opts.out) / name;
        outputs.push_back(p.generic_string());
        return p;
    }

    void write_manifest()
    {
        json m;
        m["command"] = command;
        m["config"] = config;
        m["config_digest"] = hex_digest(config.dump());
        m["seed"] = opts.seed;
        m["output_paths"] = outputs;
        m["tool_version"] = geosat::version;
        m["numeric_failure"] = numeric_failure;
        for (auto const& [k, v] : extra.items())
            m[k] = v;
        fs::path const p = fs::path(opts.out) / (command + "_manifest.json");
        std::ofstream out(p, std::ios::binary);
        if (!out)
            throw ConfigError("cannot write " + p.string());
        out << m.dump(2) << '\n';
    }
};

json network_json(GlobalOptions const& o)
{
    json j;
    j["n_sats"] = o.n_sats;
    j["alpha"] = o.alpha;
    j["gain_ratio_db"] = o.gain_ratio_db;
    j["nakagami_m"] = o.nakagami_m;
    j["latitude_deg"] = o.latitude_deg;
    j["longitude_deg"] = o.longitude_deg;
    j["eirp_density_dbw_mhz"] = o.eirp_density_dbw_mhz;
    j["g_serving_dbi"] = o.g_serving_dbi;
    j["g_terminal_dbi"] = o.g_terminal_dbi;
    j["carrier_ghz"] = o.carrier_ghz;
    j["bandwidth_mhz"] = o.bandwidth_mhz;
    j["noise_dbm_hz"] = o.noise_dbm_hz;
    j["path_loss_ref_km"] = o.path_loss_ref_km;
    j["rel_tol"] = o.rel_tol;
    j["max_panels"] = o.max_panels;
    return j;
}

geosat::NetworkConfig network(GlobalOptions const& o)
{
    using namespace geosat;
    NetworkConfig cfg;
    cfg.n_sats = o.n_sats;
    cfg.alpha = o.alpha;
    cfg.nakagami_m = o.nakagami_m;
    cfg.carrier_hz = o.carrier_ghz * 1e9;
    cfg.bandwidth_hz = o.bandwidth_mhz * 1e6;
    cfg.tx_power_w = pt_from_eirp_density(o.eirp_density_dbw_mhz, o.g_serving_dbi, cfg.bandwidth_hz);
    cfg.g_serving = db_to_linear(o.g_serving_dbi + o.g_terminal_dbi);
    cfg.g_interferer = db_to_linear(o.g_serving_dbi + o.g_terminal_dbi - o.gain_ratio_db);
    cfg.noise_density_w_hz = dbm_to_watts(o.noise_dbm_hz);
    cfg.path_loss_reference_km = o.path_loss_ref_km;
    try
    {
        cfg.validate();
    }
    catch (DomainError const& e)
    {
        throw ConfigError(e.what());
    }
    return cfg;
}

geosat::QuadratureSpec quadrature(GlobalOptions const& o)
{
    geosat::QuadratureSpec q;
    q.rel_tol = o.rel_tol;
    q.max_subdivisions = o.max_panels;
    try
    {
        q.validate();
    }
    catch (geosat::DomainError const& e)
    {
        throw ConfigError(e.what());
    }
    return q;
}

double checked_latitude(double deg)
{
    if (!(std::abs(deg) <= 90))
        throw ConfigError("latitude must lie in [-90, 90] degrees");
    return geosat::deg_to_rad(deg);
}

//---------------------------------------------------------------------------//
// VISIBILITY
//---------------------------------------------------------------------------//
struct VisibilityOptions
{
    std::string grid{"0:90:0.5"};
    std::vector<long> n_list{2, 10, 100};
};

void cmd_visibility(Run& run, VisibilityOptions const& v)
{
    using namespace geosat;
    Grid const grid = parse_grid(v.grid);
    run.config["grid"] = grid.text();
    run.config["n_list"] = v.n_list;
    auto const lats = grid.values();
    for (double lat : lats)
        checked_latitude(lat);
    for (long n : v.n_list)
    {
        if (n < 1)
            throw ConfigError("n_list entries must be >= 1");
    }

    auto const ctx = GeometryContext::geostationary();
    for (long n : v.n_list)
    {
        CsvWriter csv(run.file("visibility_N" + std::to_string(n) + ".csv"),
                      {"latitude_deg", "arc_length_km", "p_vis", "p_case1", "p_case2", "p_case3"});
        for (double lat : lats)
        {
            double const phi = deg_to_rad(lat);
            auto const c = case_probabilities(ctx, phi, n);
            csv.row({num(lat),
                     num(visible_arc_length(ctx, phi)),
                     num(p_vis(ctx, phi)),
                     num(c.none),
                     num(c.one),
                     num(c.many)});
        }
    }
}

//---------------------------------------------------------------------------//
// DISTANCES
//---------------------------------------------------------------------------//
struct DistanceOptions
{
    std::string grid;  // empty: 200 steps over [r_min, r_vis_max]
    long samples{100000};
    std::optional<double> r0_km;
};

template<class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf)
{
    if (samples.empty())
        return std::nan("");
    std::sort(samples.begin(), samples.end());
    double const n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        double const f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double empirical_cdf(std::vector<double> const& sorted, double r)
{
    if (sorted.empty())
        return std::nan("");
    auto const it = std::upper_bound(sorted.begin(), sorted.end(), r);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

void cmd_distances(Run& run, DistanceOptions const& d)
{
    using namespace geosat;
    GlobalOptions const& o = run.opts;
    double const phi = checked_latitude(o.latitude_deg);
    auto const ctx = GeometryContext::geostationary();
    if (o.n_sats < 2)
        throw ConfigError("distances needs n_sats >= 2 for the interferer law");
    if (std::abs(phi) >= ctx.phi_inv())
        throw ConfigError("latitude beyond the invisibility latitude has no serving satellite");
    if (d.samples < 0)
        throw ConfigError("samples must be >= 0");

    auto const nearest = DistanceLaw::nearest_bpp(ctx, phi, o.n_sats);
    auto const serving = DistanceLaw::serving_bpp(ctx, phi, o.n_sats);
    double const r0 = d.r0_km ? *d.r0_km : quantile(serving, 0.5);
    if (!(r0 >= serving.support_lo() && r0 <= serving.support_hi()))
        throw ConfigError("r0 must lie in [r_min, r_vis_max]");
    auto const interferer = DistanceLaw::interferer_given_r0(ctx, phi, o.n_sats, r0);

    Grid grid;
    if (d.grid.empty())
    {
        grid.lo = r_min(ctx, phi);
        grid.hi = ctx.r_vis_max();
        grid.step = (grid.hi - grid.lo) / 200;
    }
    else
    {
        grid = parse_grid(d.grid);
    }
    run.config["grid"] = grid.text();
    run.config["samples"] = d.samples;
    run.config["r0_km"] = r0;

    std::vector<double> emp_r, emp_r0, emp_rn;
    if (d.samples > 0)
    {
        emp_r = sample_nearest_distances(ctx, phi, o.n_sats, d.samples, o.seed);
        emp_r0 = sample_serving_distances(ctx, phi, o.n_sats, d.samples, o.seed ^ 0x1);
        emp_rn = sample_interferer_distances_given_r0(
            ctx, phi, o.n_sats, r0, d.samples, o.seed ^ 0x2);
        json ks;
        ks["R"] = ks_statistic(emp_r, [&](double r) { return cdf(nearest, r); });
        ks["R0"] = ks_statistic(emp_r0, [&](double r) { return cdf(serving, r); });
        ks["Rn"] = ks_statistic(emp_rn, [&](double r) { return cdf(interferer, r); });
        std::printf("KS R=%.5f R0=%.5f Rn=%.5f (%ld samples)\n",
                    ks["R"].get<double>(),
                    ks["R0"].get<double>(),
                    ks["Rn"].get<double>(),
                    d.samples);
        run.extra["ks"] = ks;
        std::sort(emp_r.begin(), emp_r.end());
        std::sort(emp_r0.begin(), emp_r0.end());
        std::sort(emp_rn.begin(), emp_rn.end());
    }

    CsvWriter csv(run.file("distances.csv"),
                  {"r_km", "cdf_R", "cdf_R0", "cdf_Rn", "emp_R", "emp_R0", "emp_Rn"});
    for (double r : grid.values())
    {
        csv.row({num(r),
                 num(cdf(nearest, r)),
                 num(cdf(serving, r)),
                 num(cdf(interferer, r)),
                 num(empirical_cdf(emp_r, r)),
                 num(empirical_cdf(emp_r0, r)),
                 num(empirical_cdf(emp_rn, r))});
    }
}

//---------------------------------------------------------------------------//
// COVERAGE
//---------------------------------------------------------------------------//
struct CoverageOptions
{
    std::string sweep{"tau"};
    std::string grid;
    std::string methods{"bpp,ppp,mc"};
    long trials{100000};
    double tau_db{0.0};
};

struct MethodSet
{
    bool bpp{false};
    bool ppp{false};
    bool mc{false};
};

MethodSet parse_methods(std::string const& text)
{
    MethodSet m;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item == "bpp")
            m.bpp = true;
        else if (item == "ppp")
            m.ppp = true;
        else if (item == "mc")
            m.mc = true;
        else
            throw ConfigError("unknown method '" + item + "' (expected bpp, ppp, mc)");
    }
    if (!m.bpp && !m.ppp && !m.mc)
        throw ConfigError("no coverage method selected");
    return m;
}

struct CoverageRow
{
    double x{0};
    double bpp{std::nan("")};
    double ppp{std::nan("")};
    double mc{std::nan("")};
    double bpp_err{std::nan("")};
    double ppp_err{std::nan("")};
    double mc_half{std::nan("")};
    std::vector<std::string> failures;
};

void cmd_coverage(Run& run, CoverageOptions const& c)
{
    using namespace geosat;
    GlobalOptions const& o = run.opts;
    MethodSet const methods = parse_methods(c.methods);
    if (c.sweep != "tau" && c.sweep != "n" && c.sweep != "lat")
        throw ConfigError("sweep must be one of tau, n, lat");
    if (methods.mc && c.trials < 1)
        throw ConfigError("trials must be >= 1");
    std::string const default_grid = c.sweep == "tau" ? "-10:20:1"
                                      : c.sweep == "n" ? "10:400:10"
                                                       : "0:90:1";
    Grid const grid = parse_grid(c.grid.empty() ? default_grid : c.grid);
    run.config["sweep"] = c.sweep;
    run.config["grid"] = grid.text();
    run.config["methods"] = c.methods;
    run.config["trials"] = c.trials;
    run.config["tau_db"] = c.tau_db;

    auto const ctx = GeometryContext::geostationary();
    auto const base = network(o);
    auto const quad = quadrature(o);
    auto const xs = grid.values();
    std::vector<CoverageRow> rows(xs.size());

    auto row_setup = [&](double x, NetworkConfig& cfg, double& phi, double& tau) {
        cfg = base;
        phi = checked_latitude(o.latitude_deg);
        tau = db_to_linear(c.tau_db);
        if (c.sweep == "tau")
        {
            tau = db_to_linear(x);
        }
        else if (c.sweep == "n")
        {
            if (x < 1 || x != std::floor(x))
                throw ConfigError("N sweep needs positive integer grid values");
            cfg.n_sats = static_cast<long>(x);
        }
        else
        {
            phi = checked_latitude(x);
        }
    };
    // validate every row before starting work
    for (double x : xs)
    {
        NetworkConfig cfg;
        double phi = 0, tau = 0;
        row_setup(x, cfg, phi, tau);
    }

    parallel_for(xs.size(), o.workers, [&](std::size_t i) {
        CoverageRow& row = rows[i];
        row.x = xs[i];
        NetworkConfig cfg;
        double phi = 0, tau = 0;
        row_setup(xs[i], cfg, phi, tau);
        auto analytic = [&](CoverageMethod m, double& value, double& err, char const* name) {
            try
            {
                auto const r = coverage(m, cfg, ctx, phi, tau, quad);
                value = r.probability;
                err = r.quadrature_error_estimate;
            }
            catch (ConvergenceError const& e)
            {
                row.failures.push_back(std::string(name) + ": " + e.what());
            }
        };
        if (methods.bpp)
            analytic(CoverageMethod::bpp_analytic, row.bpp, row.bpp_err, "bpp");
        if (methods.ppp)
            analytic(CoverageMethod::ppp_analytic, row.ppp, row.ppp_err, "ppp");
        if (methods.mc && c.sweep != "tau")
        {
            double const lon = deg_to_rad(o.longitude_deg);
            auto const e = estimate(cfg, ctx, TerminalPosition::at(ctx, phi, lon), tau, c.trials, o.seed);
            row.mc = e.result.probability;
            row.mc_half = e.half_width;
        }
    });
    if (methods.mc && c.sweep == "tau")
    {
        double const phi = checked_latitude(o.latitude_deg);
        auto const terminal = TerminalPosition::at(ctx, phi, deg_to_rad(o.longitude_deg));
        std::vector<double> taus;
        for (double x : xs)
            taus.push_back(db_to_linear(x));
        auto const est = estimate_sweep(base, ctx, terminal, taus, c.trials, o.seed, o.workers);
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            rows[i].mc = est[i].result.probability;
            rows[i].mc_half = est[i].half_width;
        }
    }

    std::string const xname = c.sweep == "tau" ? "tau_db" : c.sweep == "n" ? "n_sats" : "latitude_deg";
    std::vector<std::string> header{xname};
    if (methods.bpp)
        header.push_back("bpp");
    if (methods.ppp)
        header.push_back("ppp");
    if (methods.mc)
        header.push_back("mc");
    CsvWriter csv(run.file("coverage.csv"), header);

    json bpp_err = json::array(), ppp_err = json::array(), mc_half = json::array();
    json failures = json::array();
    for (CoverageRow const& row : rows)
    {
        std::vector<std::string> cells{num(row.x)};
        if (methods.bpp)
            cells.push_back(num(row.bpp));
        if (methods.ppp)
            cells.push_back(num(row.ppp));
        if (methods.mc)
            cells.push_back(num(row.mc));
        csv.row(cells);
        bpp_err.push_back(row.bpp_err);
        ppp_err.push_back(row.ppp_err);
        mc_half.push_back(row.mc_half);
        for (auto const& f : row.failures)
        {
            std::fprintf(stderr, "warning: %s=%s: %s\n", xname.c_str(), num(row.x).c_str(), f.c_str());
            failures.push_back({{xname, row.x}, {"message", f}});
        }
    }
    if (methods.bpp)
        run.extra["quadrature_error_bpp"] = bpp_err;
    if (methods.ppp)
        run.extra["quadrature_error_ppp"] = ppp_err;
    if (methods.mc)
        run.extra["mc_half_width"] = mc_half;
    run.extra["failures"] = failures;
    run.numeric_failure = !failures.empty();
}

//---------------------------------------------------------------------------//
// TLE
//---------------------------------------------------------------------------//
struct TleOptions
{
    std::string file{"data/geo_fixture.tle"};
    double inclination_max_deg{1.0};
    std::string grid{"0:90:1"};
};

void cmd_tle(Run& run, TleOptions const& t)
{
    using namespace geosat;
    GlobalOptions const& o = run.opts;
    Grid const grid = parse_grid(t.grid);
    run.config["file"] = t.file;
    run.config["inclination_max_deg"] = t.inclination_max_deg;
    run.config["grid"] = grid.text();
    for (double lat : grid.values())
        checked_latitude(lat);

    std::ifstream in(t.file, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open " + t.file);
    std::stringstream ss;
    ss << in.rdbuf();
    auto const parsed = parse_tle(ss.str(), o.strict);
    for (auto const& d : parsed.diagnostics)
        std::fprintf(stderr, "warning: %s: skipped (%s)\n", t.file.c_str(), d.message.c_str());

    auto const snap = make_geo_snapshot(parsed.records, t.inclination_max_deg);
    if (snap.longitudes.empty())
        throw ConfigError("no near-geostationary records below the inclination threshold");
    run.extra["source_count"] = snap.source_count;
    run.extra["filtered_count"] = snap.longitudes.size();
    run.extra["skipped_groups"] = parsed.diagnostics.size();
    std::printf("%zu records, %zu near-geostationary below %.3g deg\n",
                snap.source_count,
                snap.longitudes.size(),
                t.inclination_max_deg);

    {
        CsvWriter csv(run.file("tle_longitudes.csv"), {"longitude_deg"});
        for (double lon : snap.longitudes)
            csv.row({num(rad_to_deg(lon))});
    }
    auto const ctx = GeometryContext::geostationary();
    CsvWriter csv(run.file("tle_visible.csv"),
                  {"latitude_deg", "avg_visible_actual", "avg_visible_bpp"});
    double const n = static_cast<double>(snap.longitudes.size());
    for (double lat : grid.values())
    {
        double const phi = deg_to_rad(lat);
        csv.row({num(lat),
                 num(average_visible_count(snap, ctx, phi, o.workers)),
                 num(n * p_vis(ctx, phi))});
    }
}

//---------------------------------------------------------------------------//
// MONTE CARLO TRIAL DUMP
//---------------------------------------------------------------------------//
struct TrialOptions
{
    long trials{1000};
    double tau_db{0.0};
};

void cmd_montecarlo(Run& run, TrialOptions const& t)
{
    using namespace geosat;
    GlobalOptions const& o = run.opts;
    if (t.trials < 1)
        throw ConfigError("trials must be >= 1");
    run.config["trials"] = t.trials;
    run.config["tau_db"] = t.tau_db;
    auto const ctx = GeometryContext::geostationary();
    auto const cfg = network(o);
    auto const terminal = TerminalPosition::at(
        ctx, checked_latitude(o.latitude_deg), deg_to_rad(o.longitude_deg));
    double const tau = db_to_linear(t.tau_db);

    std::vector<TrialOutcome> trials(static_cast<std::size_t>(t.trials));
    parallel_for(trials.size(), o.workers, [&](std::size_t i) {
        auto rng = substream(o.seed, i);
        trials[i] = run_trial(cfg, ctx, terminal, tau, rng);
    });

    CsvWriter csv(run.file("montecarlo_trials.csv"),
                  {"trial", "case", "serving_distance_km", "n_interferers", "sinr", "covered"});
    long covered = 0;
    for (std::size_t i = 0; i < trials.size(); ++i)
    {
        auto const& tr = trials[i];
        char const* kind = tr.visibility == VisibilityCase::none  ? "none"
                           : tr.visibility == VisibilityCase::one ? "one"
                                                                  : "many";
        covered += tr.covered;
        csv.row({std::to_string(i),
                 kind,
                 num(tr.serving_distance.value_or(std::nan(""))),
                 std::to_string(tr.interferer_distances.size()),
                 num(tr.sinr),
                 tr.covered ? "1" : "0"});
    }
    run.extra["covered_fraction"] = static_cast<double>(covered) / static_cast<double>(t.trials);
}

}  // namespace

//---------------------------------------------------------------------------//
int main(int argc, char** argv)
{
    CLI::App app{"GEO satellite network coverage: figure data and Monte Carlo checks"};
    app.set_version_flag("--version", std::string(geosat::version));
    app.set_config("--config", "", "INI/TOML file; [section] names match subcommands");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    app.add_option("--out", opts.out, "Output directory")->capture_default_str();
    app.add_flag("--strict", opts.strict, "Fail on numeric or parse problems");
    app.add_option("--workers", opts.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
    app.add_option("--n-sats", opts.n_sats, "Number of GEO satellites N")->capture_default_str();
    app.add_option("--alpha", opts.alpha, "Path-loss exponent")->capture_default_str();
    app.add_option("--gain-ratio-db", opts.gain_ratio_db, "Main lobe to sidelobe ratio G0/Gn")
        ->capture_default_str();
    app.add_option("--nakagami-m", opts.nakagami_m, "Nakagami shape (integer)")
        ->capture_default_str();
    app.add_option("--latitude-deg", opts.latitude_deg, "Terminal latitude")->capture_default_str();
    app.add_option("--longitude-deg", opts.longitude_deg, "Terminal longitude")
        ->capture_default_str();
    app.add_option("--eirp-density-dbw-mhz", opts.eirp_density_dbw_mhz)->capture_default_str();
    app.add_option("--g-serving-dbi", opts.g_serving_dbi, "Satellite main-lobe gain")
        ->capture_default_str();
    app.add_option("--g-terminal-dbi", opts.g_terminal_dbi)->capture_default_str();
    app.add_option("--carrier-ghz", opts.carrier_ghz)->capture_default_str();
    app.add_option("--bandwidth-mhz", opts.bandwidth_mhz)->capture_default_str();
    app.add_option("--noise-dbm-hz", opts.noise_dbm_hz)->capture_default_str();
    app.add_option("--path-loss-ref-km", opts.path_loss_ref_km, "Distance unit of the path loss")
        ->capture_default_str();
    app.add_option("--rel-tol", opts.rel_tol, "Quadrature relative tolerance")
        ->capture_default_str();
    app.add_option("--max-panels", opts.max_panels, "Quadrature subdivision budget")
        ->capture_default_str();

    VisibilityOptions vis;
    auto* s_vis = app.add_subcommand("visibility", "Visible arc and case probabilities vs latitude");
    s_vis->add_option("--grid", vis.grid, "Latitude grid lo:hi:step (deg)")->capture_default_str();
    s_vis->add_option("--n-list", vis.n_list, "Constellation sizes")->delimiter(',');

    DistanceOptions dist;
    auto* s_dist = app.add_subcommand("distances", "Analytic and empirical distance CDFs");
    s_dist->add_option("--grid", dist.grid, "Distance grid lo:hi:step (km)");
    s_dist->add_option("--samples", dist.samples, "Monte Carlo samples per law")
        ->capture_default_str();
    s_dist->add_option("--r0-km", dist.r0_km, "Serving distance for the interferer law");

    CoverageOptions cov;
    auto* s_cov = app.add_subcommand("coverage", "Coverage probability sweeps");
    s_cov->add_option("--sweep", cov.sweep, "tau, n or lat")->capture_default_str();
    s_cov->add_option("--grid", cov.grid, "Sweep grid lo:hi:step");
    s_cov->add_option("--methods", cov.methods, "Comma list of bpp, ppp, mc")
        ->capture_default_str();
    s_cov->add_option("--trials", cov.trials, "Monte Carlo trials per row")->capture_default_str();
    s_cov->add_option("--tau-db", cov.tau_db, "Threshold for n and lat sweeps")
        ->capture_default_str();

    TleOptions tle;
    auto* s_tle = app.add_subcommand("tle", "Actual GEO constellation from a TLE file");
    s_tle->add_option("--tle-file", tle.file, "Two-line element file")->capture_default_str();
    s_tle->add_option("--inclination-max-deg", tle.inclination_max_deg)->capture_default_str();
    s_tle->add_option("--grid", tle.grid, "Latitude grid lo:hi:step (deg)")->capture_default_str();

    TrialOptions mc;
    auto* s_mc = app.add_subcommand("montecarlo", "Raw per-trial dump");
    s_mc->add_option("--trials", mc.trials)->capture_default_str();
    s_mc->add_option("--tau-db", mc.tau_db)->capture_default_str();

    for (auto* sub : {s_vis, s_dist, s_cov, s_tle, s_mc})
        sub->configurable();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return exit_config;
    }

    auto* sub = app.get_subcommands().front();
    Run run{sub->get_name(), opts, network_json(opts), json::object(), {}, false};
    try
    {
        fs::create_directories(opts.out);
        if (sub == s_vis)
            cmd_visibility(run, vis);
        else if (sub == s_dist)
            cmd_distances(run, dist);
        else if (sub == s_cov)
            cmd_coverage(run, cov);
        else if (sub == s_tle)
            cmd_tle(run, tle);
        else
            cmd_montecarlo(run, mc);
        run.write_manifest();
    }
    catch (ConfigError const& e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    }
    catch (geosat::DomainError const& e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    }
    catch (geosat::TleParseError const& e)
    {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return exit_parse;
    }
    catch (geosat::ConvergenceError const& e)
    {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return exit_numeric;
    }
    catch (fs::filesystem_error const& e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    }
    if (run.numeric_failure && opts.strict)
    {
        std::fprintf(stderr, "numeric failure in strict mode\n");
        return exit_numeric;
    }
    return exit_ok;
}
