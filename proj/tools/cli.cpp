#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fcount/analytics.hpp"
#include "fcount/common.hpp"
#include "fcount/distributions.hpp"
#include "fcount/governing.hpp"
#include "fcount/processes.hpp"
#include "fcount/rates.hpp"
#include "fcount/specfun.hpp"

namespace fcount::cli {

namespace {

using json = nlohmann::json;
using processes::Family;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

rates::RateFunction parse_rate(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--rate", "expected kind:params, e.g. weibull:b=1,c=2");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    auto params = [&rest]() {
        std::map<std::string, double> kv;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--rate", "expected name=value pairs: " + item);
            kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
        return kv;
    };
    if (kind == "constant") return rates::RateFunction::constant(std::stod(rest));
    if (kind == "weibull") {
        auto kv = params();
        return rates::RateFunction::weibull(kv.at("b"), kv.at("c"));
    }
    if (kind == "makeham") {
        auto kv = params();
        return rates::RateFunction::makeham(kv.at("b"), kv.at("c"), kv.at("mu"));
    }
    if (kind == "table") return rates::RateFunction::table_from_csv(rest);
    throw CLI::ValidationError("--rate", "unknown rate kind: " + kind);
}

// ---------------------------------------------------------------------------
// Output writer: CSV with a '#' header block, or one JSON document with the
// same content. The data section is deterministic for a fixed config+seed.
// ---------------------------------------------------------------------------
struct Artifact {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
    void add_param(const std::string& k, double v) { params.emplace_back(k, fmt(v)); }

    std::string to_csv(bool with_timestamp) const {
        std::ostringstream out;
        out << "# fcount " << FCOUNT_VERSION << "\n";
        out << "# command: " << command << "\n";
        for (const auto& [k, v] : params) out << "# " << k << ": " << v << "\n";
        if (seed) out << "# seed: " << *seed << "\n";
        if (with_timestamp) out << "# generated: " << timestamp_utc() << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << columns[i] << (i + 1 < columns.size() ? "," : "");
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "");
            out << "\n";
        }
        return out.str();
    }

    std::string to_json(bool with_timestamp) const {
        json doc;
        doc["tool"] = "fcount";
        doc["version"] = FCOUNT_VERSION;
        doc["command"] = command;
        json p = json::object();
        for (const auto& [k, v] : params) p[k] = v;
        doc["params"] = p;
        if (seed) doc["seed"] = *seed;
        if (with_timestamp) doc["generated"] = timestamp_utc();
        doc["columns"] = columns;
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }

    void write(const std::string& path, const std::string& format, bool with_timestamp) const {
        const std::string body =
            format == "json" ? to_json(with_timestamp) : to_csv(with_timestamp);
        if (path.empty() || path == "-") {
            std::cout << body;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << body;
    }
};

// Common family/parameter flags shared by several subcommands.
struct SpecFlags {
    std::string family;
    int k = 1;
    double rho = -1.0;
    double alpha = -1.0;
    double lam = -1.0;
    std::string rate;

    void attach(CLI::App* cmd, bool rate_allowed = true) {
        cmd->add_option("--family", family, "process family")->required();
        cmd->add_option("--k", k, "order k (jump sizes live on 1..k)");
        cmd->add_option("--rho", rho, "truncated-geometric parameter (PA families)");
        cmd->add_option("--alpha", alpha, "fractional order in (0,1]; 1 = classical");
        cmd->add_option("--lambda", lam, "constant intensity");
        if (rate_allowed)
            cmd->add_option("--rate", rate,
                            "rate function: constant:v | weibull:b=..,c=.. | "
                            "makeham:b=..,c=..,mu=.. | table:file.csv");
    }

    processes::ProcessSpec build() const {
        processes::ProcessSpec spec;
        spec.family = processes::family_from_string(family);
        spec.k = k;
        if (rho >= 0.0) spec.rho = rho;
        if (alpha > 0.0) spec.alpha = alpha;
        if (lam > 0.0) spec.lam = lam;
        if (!rate.empty()) spec.rate = parse_rate(rate);
        spec.validate();
        return spec;
    }

    void describe_into(Artifact& a) const {
        a.add_param("family", family);
        a.add_param("k", std::to_string(k));
        if (rho >= 0.0) a.add_param("rho", rho);
        if (alpha > 0.0) a.add_param("alpha", alpha);
        if (lam > 0.0) a.add_param("lambda", lam);
        if (!rate.empty()) a.add_param("rate", rate);
    }
};

struct OutputFlags {
    std::string out_path;
    std::string format = "csv";
    bool no_timestamp = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output file ('-' or empty: stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--no-timestamp", no_timestamp,
                      "omit the generation timestamp from the header");
    }

    void write(const Artifact& a) const { a.write(out_path, format, !no_timestamp); }
};

// ---------------------------------------------------------------------------

int cmd_simulate(const SpecFlags& sf, const OutputFlags& of, double t_end, double grid_start,
                 int grid_points, int n_paths, std::uint64_t seed, const std::string& method,
                 bool appendix_scale, double step_scale) {
    const auto spec = sf.build();
    if (!(t_end > 0.0)) throw CLI::ValidationError("--t-end", "must be > 0");
    if (grid_points < 1) throw CLI::ValidationError("--grid-points", "must be >= 1");

    std::vector<double> grid;
    if (grid_points == 1) {
        grid = {t_end};
    } else {
        for (int i = 0; i < grid_points; ++i)
            grid.push_back(grid_start + (t_end - grid_start) * i / (grid_points - 1));
    }

    processes::Ensemble e;
    if (spec.family == Family::fppk && method == "timechange") {
        // ensemble() defaults FPPk to the renewal representation; honor the flag
        e.spec = spec;
        e.grid = grid;
        e.n_paths = n_paths;
        e.seed = seed;
        e.counts.resize(static_cast<std::size_t>(n_paths) * grid.size());
        processes::FppkOptions opts;
        opts.step_scale = step_scale;
        opts.appendix_scale_compat = appendix_scale;
        for (int p = 0; p < n_paths; ++p) {
            sampling::RngStream rng(seed, static_cast<std::uint64_t>(p));
            const auto cg = processes::simulate_fppk(rng, spec.k, *spec.lam, *spec.alpha, grid,
                                                     processes::FppkMethod::timechange, opts);
            std::copy(cg.counts.begin(), cg.counts.end(),
                      e.counts.begin() + static_cast<std::size_t>(p) * grid.size());
        }
    } else if (spec.family == Family::fppk && appendix_scale) {
        e.spec = spec;
        e.grid = grid;
        e.n_paths = n_paths;
        e.seed = seed;
        e.counts.resize(static_cast<std::size_t>(n_paths) * grid.size());
        processes::FppkOptions opts;
        opts.appendix_scale_compat = true;
        for (int p = 0; p < n_paths; ++p) {
            sampling::RngStream rng(seed, static_cast<std::uint64_t>(p));
            const auto cg = processes::simulate_fppk(rng, spec.k, *spec.lam, *spec.alpha, grid,
                                                     processes::FppkMethod::renewal, opts);
            std::copy(cg.counts.begin(), cg.counts.end(),
                      e.counts.begin() + static_cast<std::size_t>(p) * grid.size());
        }
    } else {
        e = processes::ensemble(seed, spec, n_paths, grid);
    }

    Artifact a;
    a.command = "simulate";
    sf.describe_into(a);
    a.add_param("t_end", t_end);
    a.add_param("grid_start", grid_start);
    a.add_param("grid_points", std::to_string(grid_points));
    a.add_param("n_paths", std::to_string(n_paths));
    if (spec.family == Family::fppk) {
        a.add_param("method", method);
        if (appendix_scale) a.add_param("appendix_scale", "true");
    }
    a.seed = seed;
    a.columns = {"path"};
    for (double g : grid) a.columns.push_back("N(t=" + fmt(g) + ")");
    a.rows.reserve(static_cast<std::size_t>(n_paths));
    for (int p = 0; p < n_paths; ++p) {
        std::vector<std::string> row{std::to_string(p)};
        for (std::size_t j = 0; j < grid.size(); ++j)
            row.push_back(std::to_string(e.at(p, static_cast<int>(j))));
        a.rows.push_back(std::move(row));
    }
    of.write(a);
    return 0;
}

int cmd_pmf(const OutputFlags& of, const std::string& family, int k, double rho, double mass,
            double lam, double alpha, double t, int m_max) {
    distributions::PmfVector pmf;
    Artifact a;
    a.command = "pmf";
    a.add_param("family", family);
    a.add_param("k", std::to_string(k));
    if (family == "ppk") {
        if (mass < 0.0) throw CLI::ValidationError("--mass", "required for ppk");
        pmf = distributions::pmf_poisson_order_k(k, mass, m_max);
        a.add_param("mass", mass);
    } else if (family == "pak") {
        if (mass < 0.0) throw CLI::ValidationError("--mass", "required for pak");
        if (rho < 0.0) throw CLI::ValidationError("--rho", "required for pak");
        pmf = distributions::pmf_polya_aeppli_order_k(k, rho, mass, m_max);
        a.add_param("rho", rho);
        a.add_param("mass", mass);
    } else if (family == "fppk") {
        if (lam <= 0.0 || alpha <= 0.0 || t < 0.0)
            throw CLI::ValidationError("--lambda/--alpha/--t", "required for fppk");
        pmf = distributions::pmf_fppk(k, lam, alpha, t, m_max);
        a.add_param("lambda", lam);
        a.add_param("alpha", alpha);
        a.add_param("t", t);
    } else {
        throw CLI::ValidationError("--family", "pmf supports ppk, pak, fppk");
    }
    a.add_param("m_max", std::to_string(m_max));
    a.add_param("tail_mass_bound", pmf.tail_mass_bound);
    a.columns = {"m", "p"};
    for (int m = 0; m <= m_max; ++m)
        a.rows.push_back({std::to_string(m), fmt(pmf.probs[static_cast<std::size_t>(m)])});
    of.write(a);
    return 0;
}

int cmd_moments(const SpecFlags& sf, const OutputFlags& of, double t, double s, int mc_paths,
                std::uint64_t seed, bool want_cov) {
    const auto spec = sf.build();
    std::optional<double> s_opt;
    if (s >= 0.0) s_opt = s;
    if (want_cov && !s_opt) throw CLI::ValidationError("--s", "cov requires --s");

    analytics::MomentReport rep;
    if (spec.family == Family::fnppk || spec.family == Family::nfpak) {
        analytics::FnppkOptions opts;
        opts.mc_paths = mc_paths;
        opts.mc_seed = seed;
        rep = spec.family == Family::fnppk
                  ? analytics::moments_fnppk(spec.k, *spec.rate, *spec.alpha, t, s_opt, opts)
                  : analytics::moments_nfpak(spec.k, *spec.rho, *spec.rate, *spec.alpha, t,
                                             s_opt, opts);
    } else {
        rep = analytics::moments_for_spec(spec, t, s_opt);
    }

    Artifact a;
    a.command = want_cov ? "cov" : "moments";
    sf.describe_into(a);
    a.add_param("t", t);
    if (s_opt) a.add_param("s", *s_opt);
    a.columns = {"name", "value"};
    a.rows.push_back({"mean", fmt(rep.mean)});
    a.rows.push_back({"variance", fmt(rep.variance)});
    if (rep.covariance) {
        a.rows.push_back({"covariance", fmt(*rep.covariance)});
        if (rep.se_covariance && *rep.se_covariance > 0.0)
            a.rows.push_back({"se_covariance", fmt(*rep.se_covariance)});
    }
    of.write(a);
    return 0;
}

int cmd_lrd(const SpecFlags& sf, const OutputFlags& of, double s, double fit_lo, double fit_hi,
            int points) {
    const auto spec = sf.build();
    if (spec.family != Family::fppk && spec.family != Family::fpak)
        throw CLI::ValidationError("--family", "lrd supports fppk and fpak");
    const double rho = spec.rho.value_or(0.0);
    const double c_theory =
        analytics::lrd_constant(spec.family, spec.k, rho, *spec.lam, *spec.alpha, s);
    const auto curve = analytics::correlation_curve(spec.family, spec.k, rho, *spec.lam,
                                                    *spec.alpha, s, fit_lo, fit_hi, points);
    const auto rep = analytics::lrd_fit(curve, fit_lo, fit_hi, c_theory);

    Artifact a;
    a.command = "lrd";
    sf.describe_into(a);
    a.add_param("s", s);
    a.add_param("fit_lo", fit_lo);
    a.add_param("fit_hi", fit_hi);
    a.add_param("fitted_exponent", rep.fitted_exponent);
    a.add_param("fitted_constant", rep.fitted_constant);
    a.add_param("theoretical_constant", rep.theoretical_constant);
    a.add_param("fit_residual", rep.residual);
    a.columns = {"t", "corr"};
    for (std::size_t i = 0; i < curve.size(); ++i)
        a.rows.push_back({fmt(curve.grid[i]), fmt(curve.values[i])});
    of.write(a);
    return 0;
}

int cmd_solve(const SpecFlags& sf, const OutputFlags& of, double t_end, int steps, int m_max) {
    governing::GeneratorSpec g;
    g.family = processes::family_from_string(sf.family);
    g.k = sf.k;
    g.rho = sf.rho >= 0.0 ? sf.rho : 0.0;
    g.lam = sf.lam;
    g.alpha = sf.alpha;
    g.m_max = m_max;
    g.validate();
    if (!(t_end > 0.0) || steps < 1)
        throw CLI::ValidationError("--t-end/--steps", "need t_end > 0 and steps >= 1");
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = t_end * i / steps;
    const auto sol = governing::solve_fractional_master(g, grid);

    Artifact a;
    a.command = "solve";
    sf.describe_into(a);
    a.add_param("t_end", t_end);
    a.add_param("steps", std::to_string(steps));
    a.add_param("m_max", std::to_string(m_max));
    a.columns = {"t"};
    for (int m = 0; m <= m_max; ++m) a.columns.push_back("p" + std::to_string(m));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row{fmt(grid[i])};
        for (int m = 0; m <= m_max; ++m)
            row.push_back(fmt(sol[i].probs[static_cast<std::size_t>(m)]));
        a.rows.push_back(std::move(row));
    }
    of.write(a);
    return 0;
}

int cmd_check_governing(const SpecFlags& sf, const OutputFlags& of, double t_end, int steps,
                        int m_max, double v, int levels, double t_min, double quad_tol) {
    const Family family = processes::family_from_string(sf.family);
    Artifact a;
    a.command = "check-governing";
    sf.describe_into(a);
    a.add_param("t_end", t_end);
    a.add_param("steps", std::to_string(steps));
    a.add_param("m_max", std::to_string(m_max));
    a.add_param("levels", std::to_string(levels));
    a.add_param("t_min", t_min);
    a.columns = {"level", "steps", "quad_tol", "residual"};

    for (int level = 0; level < levels; ++level) {
        const int n = steps << level;
        const double tol = quad_tol * std::pow(0.1, level);
        std::vector<double> grid(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = t_end * i / n;
        double res;
        if (family == Family::fnppk || family == Family::nfpak) {
            std::optional<double> rho;
            if (sf.rho >= 0.0) rho = sf.rho;
            res = governing::residual_nonhomogeneous(family, sf.k, rho, parse_rate(sf.rate),
                                                     sf.alpha, v, grid, m_max, tol, t_min);
        } else {
            governing::GeneratorSpec g;
            g.family = family;
            g.k = sf.k;
            g.rho = sf.rho >= 0.0 ? sf.rho : 0.0;
            g.lam = sf.lam;
            g.alpha = sf.alpha;
            g.m_max = m_max;
            g.validate();
            std::vector<std::vector<double>> curves;
            if (family == Family::fppk) {
                curves.assign(static_cast<std::size_t>(m_max) + 1,
                              std::vector<double>(grid.size(), 0.0));
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const auto pmf =
                        distributions::pmf_fppk(g.k, g.lam, g.alpha, grid[i], m_max);
                    for (int m = 0; m <= m_max; ++m)
                        curves[static_cast<std::size_t>(m)][i] =
                            pmf.probs[static_cast<std::size_t>(m)];
                }
            } else {
                // independent curve source: the solver on a twice-refined grid,
                // subsampled back to this grid
                std::vector<double> fine(2 * grid.size() - 1);
                for (std::size_t i = 0; i < fine.size(); ++i)
                    fine[i] = t_end * static_cast<double>(i) / (fine.size() - 1);
                const auto sol = governing::solve_fractional_master(g, fine);
                curves.assign(static_cast<std::size_t>(m_max) + 1,
                              std::vector<double>(grid.size(), 0.0));
                for (std::size_t i = 0; i < grid.size(); ++i)
                    for (int m = 0; m <= m_max; ++m)
                        curves[static_cast<std::size_t>(m)][i] =
                            sol[2 * i].probs[static_cast<std::size_t>(m)];
            }
            res = governing::residual_homogeneous(g, grid, curves, t_min);
        }
        a.rows.push_back({std::to_string(level), std::to_string(n), fmt(tol), fmt(res)});
    }
    of.write(a);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"fcount: counting processes of order k (Poisson and Polya-Aeppli; "
                 "homogeneous, non-homogeneous, fractional, fractional non-homogeneous)"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "sample paths / ensembles on a grid");
    SpecFlags sim_spec;
    OutputFlags sim_out;
    sim_spec.attach(sim);
    sim_out.attach(sim);
    double sim_t_end = 1.0, sim_grid_start = 0.0, sim_step_scale = 1e-3;
    int sim_grid_points = 1, sim_n_paths = 1;
    std::uint64_t sim_seed = 0;
    std::string sim_method = "renewal";
    bool sim_appendix = false;
    sim->add_option("--t-end", sim_t_end, "end of the observation window")->required();
    sim->add_option("--grid-start", sim_grid_start, "first reported time (grid-points > 1)");
    sim->add_option("--grid-points", sim_grid_points, "number of reported times");
    sim->add_option("--n-paths", sim_n_paths, "independent paths");
    sim->add_option("--seed", sim_seed, "RNG seed; path i uses stream (seed, i)");
    sim->add_option("--method", sim_method, "fppk: renewal or timechange")
        ->check(CLI::IsMember({"renewal", "timechange"}));
    sim->add_flag("--appendix-scale", sim_appendix,
                  "fppk renewal: waiting-time scale gamma = lambda (compatibility)");
    sim->add_option("--step-scale", sim_step_scale, "operational lattice step factor");

    // ---- pmf ----
    auto* pmf = app.add_subcommand("pmf", "exact marginal pmf");
    OutputFlags pmf_out;
    pmf_out.attach(pmf);
    std::string pmf_family;
    int pmf_k = 1, pmf_m_max = 10;
    double pmf_rho = -1.0, pmf_mass = -1.0, pmf_lam = -1.0, pmf_alpha = -1.0, pmf_t = -1.0;
    pmf->add_option("--family", pmf_family, "ppk | pak | fppk")->required();
    pmf->add_option("--k", pmf_k, "order k");
    pmf->add_option("--rho", pmf_rho, "pak: truncated-geometric parameter");
    pmf->add_option("--mass", pmf_mass, "ppk/pak: Poisson parameter Lambda (or interval mass)");
    pmf->add_option("--lambda", pmf_lam, "fppk: intensity");
    pmf->add_option("--alpha", pmf_alpha, "fppk: fractional order");
    pmf->add_option("--t", pmf_t, "fppk: time");
    pmf->add_option("--m-max", pmf_m_max, "largest m reported");

    // ---- moments / cov ----
    auto* mom = app.add_subcommand("moments", "analytic mean/variance (covariance with --s)");
    SpecFlags mom_spec;
    OutputFlags mom_out;
    mom_spec.attach(mom);
    mom_out.attach(mom);
    double mom_t = 1.0, mom_s = -1.0;
    int mom_mc = 100000;
    std::uint64_t mom_seed = 20260810;
    mom->add_option("--t", mom_t, "time")->required();
    mom->add_option("--s", mom_s, "second time (adds the covariance row)");
    mom->add_option("--mc-paths", mom_mc, "Monte Carlo paths for the FNPPk/NFPAk cross term");
    mom->add_option("--seed", mom_seed, "Monte Carlo seed for the cross term");

    auto* cov = app.add_subcommand("cov", "covariance of N(t), N(s)");
    SpecFlags cov_spec;
    OutputFlags cov_out;
    cov_spec.attach(cov);
    cov_out.attach(cov);
    double cov_t = 1.0, cov_s = -1.0;
    int cov_mc = 100000;
    std::uint64_t cov_seed = 20260810;
    cov->add_option("--t", cov_t, "first time")->required();
    cov->add_option("--s", cov_s, "second time")->required();
    cov->add_option("--mc-paths", cov_mc, "Monte Carlo paths for the FNPPk/NFPAk cross term");
    cov->add_option("--seed", cov_seed, "Monte Carlo seed for the cross term");

    // ---- lrd ----
    auto* lrd = app.add_subcommand("lrd", "long-range-dependence diagnostic (exact curve fit)");
    SpecFlags lrd_spec;
    OutputFlags lrd_out;
    lrd_spec.attach(lrd, /*rate_allowed=*/false);
    lrd_out.attach(lrd);
    double lrd_s = 1.0, lrd_lo = 1e2, lrd_hi = 1e4;
    int lrd_points = 25;
    lrd->add_option("--s", lrd_s, "fixed earlier time s");
    lrd->add_option("--fit-lo", lrd_lo, "fit range start");
    lrd->add_option("--fit-hi", lrd_hi, "fit range end");
    lrd->add_option("--points", lrd_points, "log-spaced curve points");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "solve the fractional master equations");
    SpecFlags solve_spec;
    OutputFlags solve_out;
    solve_spec.attach(solve, /*rate_allowed=*/false);
    solve_out.attach(solve);
    double solve_t_end = 2.0;
    int solve_steps = 2000, solve_m_max = 10;
    solve->add_option("--t-end", solve_t_end, "end time");
    solve->add_option("--steps", solve_steps, "uniform time steps");
    solve->add_option("--m-max", solve_m_max, "largest m retained");

    // ---- check-governing ----
    auto* chk = app.add_subcommand("check-governing",
                                   "residuals of the governing equations under refinement");
    SpecFlags chk_spec;
    OutputFlags chk_out;
    chk_spec.attach(chk);
    chk_out.attach(chk);
    double chk_t_end = 2.0, chk_v = 0.0, chk_t_min = 0.1, chk_quad_tol = 1e-7;
    int chk_steps = 250, chk_m_max = 5, chk_levels = 3;
    chk->add_option("--t-end", chk_t_end, "end time");
    chk->add_option("--steps", chk_steps, "base grid steps (doubled per level)");
    chk->add_option("--m-max", chk_m_max, "largest m checked");
    chk->add_option("--v", chk_v, "increment offset v");
    chk->add_option("--levels", chk_levels, "refinement levels");
    chk->add_option("--t-min", chk_t_min, "start of the residual reporting window");
    chk->add_option("--quad-tol", chk_quad_tol, "base quadrature tolerance (x0.1 per level)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_spec, sim_out, sim_t_end, sim_grid_start, sim_grid_points,
                                sim_n_paths, sim_seed, sim_method, sim_appendix,
                                sim_step_scale);
        if (pmf->parsed())
            return cmd_pmf(pmf_out, pmf_family, pmf_k, pmf_rho, pmf_mass, pmf_lam, pmf_alpha,
                           pmf_t, pmf_m_max);
        if (mom->parsed())
            return cmd_moments(mom_spec, mom_out, mom_t, mom_s, mom_mc, mom_seed, false);
        if (cov->parsed())
            return cmd_moments(cov_spec, cov_out, cov_t, cov_s, cov_mc, cov_seed, true);
        if (lrd->parsed()) return cmd_lrd(lrd_spec, lrd_out, lrd_s, lrd_lo, lrd_hi, lrd_points);
        if (solve->parsed())
            return cmd_solve(solve_spec, solve_out, solve_t_end, solve_steps, solve_m_max);
        if (chk->parsed())
            return cmd_check_governing(chk_spec, chk_out, chk_t_end, chk_steps, chk_m_max,
                                       chk_v, chk_levels, chk_t_min, chk_quad_tol);
    } catch (const CLI::Error& e) {
        std::cerr << "fcount: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fcount: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace fcount::cli
