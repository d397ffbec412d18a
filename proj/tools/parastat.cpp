// Command-line surface: thresholds, the (b, kappa) solver, partition sampling,
// condensate experiments, debt-crisis verdicts, flicker-noise verdicts, and a
// dump of the quadrature constants.
//
// Exit codes: 0 ok, 2 usage, 3 resource budget, 4 data error, 5 numeric
// non-convergence. Errors are emitted as JSON on stderr. Every stochastic
// command requires --seed and produces byte-identical output per seed.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parastat/common.hpp"
#include "parastat/condensate.hpp"
#include "parastat/debt.hpp"
#include "parastat/flicker.hpp"
#include "parastat/io.hpp"
#include "parastat/partitions.hpp"
#include "parastat/quadrature.hpp"
#include "parastat/solver.hpp"
#include "parastat/thresholds.hpp"

namespace ps = parastat;
using ps::io::JsonWriter;

namespace {

constexpr const char* kSchemaPrefix = "parastat.";

void emit(const JsonWriter& w) { std::printf("%s\n", w.str().c_str()); }

int fail_json(const std::string& kind, const std::string& msg, int code) {
    JsonWriter w;
    w.field("error", kind);
    w.field("message", msg);
    std::fprintf(stderr, "%s\n", w.str().c_str());
    return code;
}

struct CommonOpts {
    std::string config_path;
    std::string format = "json";
    int threads = 1;
    bool d1_half_factor = false;
    bool s_tilde_analogy = false;

    void apply_config() {
        if (config_path.empty()) return;
        auto kv = ps::io::read_config(config_path);
        auto truthy = [](const std::string& v) { return v == "1" || v == "true" || v == "yes"; };
        if (auto it = kv.find("d1-half-factor"); it != kv.end()) d1_half_factor = truthy(it->second);
        if (auto it = kv.find("fliker-s-tilde-analogy"); it != kv.end())
            s_tilde_analogy = truthy(it->second);
        if (auto it = kv.find("threads"); it != kv.end()) threads = std::stoi(it->second);
        if (auto it = kv.find("format"); it != kv.end()) format = it->second;
    }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "flat key=value config file");
    cmd->add_option("--format", c.format, "output format (json)")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--threads", c.threads, "bound on internal parallelism")
        ->check(CLI::Range(1, 64));
}

// ---------------------------------------------------------------- threshold
int cmd_threshold(long long n, int dim, double alpha, bool have_alpha, const CommonOpts& c) {
    if (n < 2) throw CLI::ValidationError("--n must be >= 2");
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "threshold/1");
    w.field("n", n);
    if (have_alpha) {
        auto g = ps::thresholds::k0_general(static_cast<double>(n), alpha);
        auto num = ps::thresholds::k0_numeric(static_cast<double>(n), alpha);
        w.field("alpha", alpha);
        w.field("k0_general", g.k0);
        w.field("k0_numeric_crosscheck", num.k0);
        w.field("crosscheck_rel_gap", std::fabs(g.k0 - num.k0) / g.k0);
        w.field("c_alpha", ps::quad::regularized_c(alpha).value);
        w.field("bose_integral_1_alpha", ps::quad::bose_integral(1.0, alpha).value);
        if (!g.note.empty()) w.field("warning", g.note);
    } else if (dim == 2) {
        auto lead = ps::thresholds::k0_leading(static_cast<double>(n));
        auto erd = ps::thresholds::k0_erdos(static_cast<double>(n));
        w.field("k0_leading", lead.k0);
        w.field("k0_erdos", erd.k0);
        w.field("erdos_c", ps::thresholds::erdos_c());
        w.field("erdos_alpha_corr", ps::thresholds::erdos_alpha_corr());
        w.field("zeta2", ps::quad::bose_integral(1.0, 1.0).value);
        if (n >= 100) {
            auto num = ps::thresholds::k0_numeric(static_cast<double>(n), 1.0);
            w.field("k0_numeric_crosscheck", num.k0);
        }
    } else if (dim == 1) {
        auto d1 = ps::thresholds::k0_d1(static_cast<double>(n));
        w.field("k0_d1", d1.k0);
        w.field("c_one_dim", ps::quad::c_one_dim().value);
        w.field("b_d1", ps::thresholds::b_d1(static_cast<double>(n), c.d1_half_factor));
        w.field("d1_half_factor", c.d1_half_factor);
        w.field("k0_d1_quadratic_crosscheck",
                ps::thresholds::k0_d1_quadratic(static_cast<double>(n), c.d1_half_factor));
    } else {
        throw CLI::ValidationError("exactly one of --dim {1,2} or --alpha must be given");
    }
    emit(w);
    return 0;
}

// -------------------------------------------------------------------- solve
int cmd_solve(long long n, long long k, double alpha, const std::string& mode) {
    ps::solver::ParastatProblem prob{n, k, alpha, 1.0};
    auto m = (mode == "discrete") ? ps::solver::SolveMode::discrete_sum
                                  : ps::solver::SolveMode::integral;
    auto th = ps::solver::solve_b_kappa(prob, m);
    double S = ps::solver::entropy(prob, th);
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "solve/1");
    w.field("n", n);
    w.field("k", k);
    w.field("alpha", alpha);
    w.field("mode", mode);
    w.field("b", th.b);
    w.field("kappa", th.kappa);
    w.field("kappa_scaled", th.kappa_scaled());
    w.field("residual_count", th.residuals.first);
    w.field("residual_sum", th.residuals.second);
    w.field("entropy", S);
    emit(w);
    return 0;
}

// ---------------------------------------------------------- partition-sample
int cmd_partition_sample(long long n, long long k, long long samples, std::uint64_t seed,
                         bool exactly_k, bool full, const std::string& cache_path) {
    auto mode = (n <= 3000) ? ps::partitions::TableMode::exact : ps::partitions::TableMode::log_space;
    ps::partitions::PartitionTable table(n, k, mode);
    if (!cache_path.empty()) table.save(cache_path);
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "sample/1");
    w.field("n", n);
    w.field("k", k);
    w.field("samples", samples);
    w.field("seed", static_cast<long long>(seed));
    w.field("exactly_k", exactly_k);
    w.field("table_mode", mode == ps::partitions::TableMode::exact ? "exact" : "log_space");
    std::string arr = "[";
    for (long long i = 0; i < samples; ++i) {
        auto occ = table.sample(n, k, seed, static_cast<std::uint64_t>(i), exactly_k);
        JsonWriter s;
        s.field("parts", occ.parts_total);
        s.field("sum", occ.sum_total);
        s.field("n0", occ.n0);
        if (full) {
            std::string cs = "[";
            bool first = true;
            for (auto& [part, cnt] : occ.counts) {
                if (!first) cs += ',';
                first = false;
                cs += "[" + std::to_string(part) + "," + std::to_string(cnt) + "]";
            }
            cs += ']';
            s.raw("counts", cs);
        }
        if (i) arr += ',';
        arr += s.str();
    }
    arr += ']';
    w.raw("draws", arr);
    emit(w);
    return 0;
}

// ----------------------------------------------------------------- condense
int cmd_condense(long long n, const std::string& k_spec, long long samples, std::uint64_t seed,
                 const std::string& phi_spec) {
    auto erd = ps::thresholds::k0_erdos(static_cast<double>(n));
    long long k;
    bool auto3 = (k_spec == "auto3");
    if (auto3)
        k = static_cast<long long>(std::llround(3.0 * erd.k0));
    else
        k = std::stoll(k_spec);
    if (samples < 30) {
        std::fprintf(stderr, "warning: samples floor raised to 30\n");
        samples = 30;
    }
    if (static_cast<long double>(n) * static_cast<long double>(k) > 2e9)
        throw ps::BudgetExceeded("condense: n*k exceeds the table budget");
    auto mode = (n <= 3000) ? ps::partitions::TableMode::exact : ps::partitions::TableMode::log_space;
    ps::partitions::PartitionTable table(n, k, mode);
    std::vector<ps::partitions::OccupancyVector> occs;
    occs.reserve(samples);
    for (long long i = 0; i < samples; ++i)
        occs.push_back(table.sample(n, k, seed, static_cast<std::uint64_t>(i)));
    auto stats = ps::partitions::condensate_statistics(occs, k, erd.k0);
    // weak-convergence report: supercritical runs use the truncated variant
    // with the k0 parameters at kappa = 0
    ps::condensate::TestFunction phi = (phi_spec == "one")
                                           ? ps::condensate::TestFunction::indicator(0.0, 1e9)
                                           : ps::condensate::TestFunction::exp_decay(1.0);
    ps::solver::ParastatProblem prob{n, k, 1.0, 1.0};
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "condense/1");
    w.field("n", n);
    w.field("k", k);
    w.field("k_auto3", auto3);
    w.field("k0_erdos", erd.k0);
    w.field("samples", samples);
    w.field("seed", static_cast<long long>(seed));
    if (static_cast<double>(k) > erd.k0) {
        long long k0i = static_cast<long long>(std::llround(erd.k0));
        ps::solver::ParastatProblem p0{n, k0i, 1.0, 1.0};
        auto th0 = ps::solver::solve_b_kappa(p0);
        auto rep = ps::condensate::weak_convergence_statistic(occs, prob, th0, phi, 10.0,
                                                              static_cast<double>(k0i));
        w.field("statistic_mean", rep.statistic);
        w.field("statistic_spread", rep.spread);
        w.field("statistic_median_abs", rep.median_abs);
        w.field("statistic_variant", "truncated_k0");
    } else {
        auto th = ps::solver::solve_b_kappa(prob);
        auto rep = ps::condensate::weak_convergence_statistic(occs, prob, th, phi);
        w.field("statistic_mean", rep.statistic);
        w.field("statistic_spread", rep.spread);
        w.field("statistic_median_abs", rep.median_abs);
        w.field("statistic_variant", "solved_params");
    }
    w.field("median_abs_dev", stats.median_abs_dev);
    w.field("band_halfwidth", stats.band_halfwidth);
    w.field("median_within_band", stats.median_abs_dev <= stats.band_halfwidth);
    w.field("band_checked", stats.band_checked);
    w.field("violation_fraction", stats.violation_fraction);
    w.field("bound", stats.bound);
    emit(w);
    return 0;
}

// --------------------------------------------------------------------- debt
int cmd_debt(const std::string& input, double window, double fill, long long wstart,
             double wfactor, double stretch, const std::string& plot_out, const CommonOpts&) {
    auto csv = ps::io::read_csv(input);
    int col_s = csv.header.empty() ? 0 : csv.column("size");
    int col_d = csv.header.empty() ? 1 : csv.column("duration");
    if (col_s < 0 || col_d < 0)
        throw ps::NonPositiveValue("debt: csv must have size,duration columns");
    std::vector<ps::debt::DebtRecord> recs;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        if (csv.rows[r].size() < 2)
            throw ps::NonPositiveValue("debt: malformed row " + std::to_string(r + 1));
        ps::debt::DebtRecord rec;
        rec.size = ps::io::parse_double(csv.rows[r][col_s], r + 1);
        rec.duration = ps::io::parse_double(csv.rows[r][col_d], r + 1);
        recs.push_back(rec);
    }
    ps::debt::IngestConfig cfg;
    cfg.duration_window = window;
    cfg.fill_granularity = fill;
    auto series = ps::debt::ingest(recs, cfg);
    double b = ps::debt::estimate_b(series, wstart, wfactor);
    auto verdict = ps::debt::duration_threshold(series, b);
    if (!plot_out.empty()) {
        std::ofstream pf(plot_out);
        pf << "x,lambda,duration,flow\n";
        for (std::size_t i = 0; i < series.size(); ++i)
            pf << ps::io::format_double(series.x[i]) << ',' << ps::io::format_double(series.lambda[i])
               << ',' << ps::io::format_double(series.durations_desc[i]) << ','
               << ps::io::format_double(series.flows[i]) << "\n";
    }
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "debt.verdict/1");
    w.field("mean_duration_T", verdict.mean_duration_T);
    w.field("threshold", verdict.threshold);
    w.field("threshold_kind", verdict.threshold_kind == ps::debt::CrisisVerdict::Kind::integral_ratio
                                  ? "integral_ratio"
                                  : "critical_Tcr");
    w.field("crisis", verdict.crisis);
    w.field("b_estimate", verdict.b_estimate);
    if (verdict.alpha_fit) w.field("alpha_fit", *verdict.alpha_fit);
    if (stretch > 1.0) {
        // duration sweep at the base-series b: rho in [1, stretch], 20 steps
        std::string arr = "[";
        int flips = 0;
        bool prev = false, have_prev = false;
        for (int j = 0; j <= 20; ++j) {
            double rho = 1.0 + (stretch - 1.0) * static_cast<double>(j) / 20.0;
            std::vector<ps::debt::DebtRecord> rr = recs;
            double lmax = 0.0;
            for (auto& q : rr) lmax = std::max(lmax, q.duration);
            for (auto& q : rr)
                if (q.duration < lmax) q.duration *= rho;
            auto sr = ps::debt::ingest(rr, cfg);
            auto vv = ps::debt::duration_threshold(sr, b);
            if (have_prev && vv.crisis != prev) ++flips;
            prev = vv.crisis;
            have_prev = true;
            JsonWriter sw;
            sw.field("rho", rho);
            sw.field("T", vv.mean_duration_T);
            sw.field("threshold", vv.threshold);
            sw.field("crisis", vv.crisis);
            if (j) arr += ',';
            arr += sw.str();
        }
        arr += ']';
        w.raw("stretch_sweep", arr);
        w.field("sweep_flips", flips);
    }
    emit(w);
    return 0;
}

// ------------------------------------------------------------------- flicker
int cmd_flicker(const std::string& input, const std::string& format, bool analogy,
                const std::string& spectrum_out) {
    auto csv = ps::io::read_csv(input);
    int col_v = csv.header.empty() ? (csv.rows.empty() || csv.rows[0].size() == 1 ? 0 : 1)
                                   : csv.column("value");
    if (col_v < 0) col_v = static_cast<int>(csv.rows[0].size()) - 1;
    ps::flicker::TimeSeries ts;
    for (std::size_t r = 0; r < csv.rows.size(); ++r)
        ts.samples.push_back(ps::io::parse_double(csv.rows[r][col_v], r + 1));
    auto spec = ps::flicker::cosine_transform(ts);
    double alpha = ps::flicker::estimate_alpha(spec);
    auto verdict = ps::flicker::flicker_verdict(spec, alpha, analogy);
    if (format == "csv" || !spectrum_out.empty()) {
        std::FILE* out = stdout;
        std::ofstream file;
        if (!spectrum_out.empty()) {
            file.open(spectrum_out);
            for (long long i = 0; i <= spec.s(); ++i) {
                file << i << ',' << ps::io::format_double(spec.a[i]) << ',';
                file << ps::io::format_double((i >= 1 && i < spec.s()) ? spec.spectral_density(i) : 0.0)
                     << "\n";
            }
        }
        if (format == "csv") {
            std::fprintf(out, "i,a_i,A_l\n");
            for (long long i = 0; i <= spec.s(); ++i)
                std::fprintf(out, "%lld,%s,%s\n", i, ps::io::format_double(spec.a[i]).c_str(),
                             ps::io::format_double((i >= 1 && i < spec.s()) ? spec.spectral_density(i) : 0.0)
                                 .c_str());
            return 0;
        }
    }
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "flicker.verdict/1");
    w.field("alpha_fit", verdict.alpha_fit);
    w.field("gamma", verdict.gamma);
    w.field("E_s", verdict.e_s);
    w.field("E_s_crit", verdict.e_s_crit);
    w.field("s_tilde", verdict.s_tilde);
    w.field("s_tilde_analogy", verdict.s_tilde_analogy);
    w.field("s0_estimate", verdict.s0_estimate);
    w.field("explosive", verdict.explosive);
    emit(w);
    return 0;
}

// ----------------------------------------------------------------- constants
int cmd_constants(std::vector<double> alphas) {
    if (alphas.empty()) alphas = {0.25, 0.5, 0.75};
    JsonWriter w;
    w.field("schema", std::string(kSchemaPrefix) + "constants/1");
    w.field("zeta2", ps::quad::bose_integral(1.0, 1.0).value);
    w.field("erdos_c", ps::thresholds::erdos_c());
    w.field("erdos_alpha_corr", ps::thresholds::erdos_alpha_corr());
    auto c1d = ps::quad::c_one_dim();
    w.field("c_one_dim", c1d.value);
    w.field("c_one_dim_err", c1d.abs_error_estimate);
    std::string arr = "[";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        double a = alphas[i];
        JsonWriter e;
        e.field("alpha", a);
        auto c = ps::quad::regularized_c(a);
        e.field("c", c.value);
        e.field("c_err", c.abs_error_estimate);
        auto b = ps::quad::bose_integral(1.0, a);
        e.field("bose_1_alpha", b.value);
        auto bq = ps::quad::bose_integral_quad(1.0, a);
        e.field("bose_1_alpha_quad", bq.value);
        e.field("bose_1_alpha_quad_err", bq.abs_error_estimate);
        auto c1 = ps::quad::c1_const(a);
        e.field("c1", c1.value);
        e.field("c1_err", c1.abs_error_estimate);
        if (i) arr += ',';
        arr += e.str();
    }
    arr += ']';
    w.raw("per_alpha", arr);
    emit(w);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"parastat: partition-threshold machinery, debt and flicker analyses"};
    app.require_subcommand(1);

    CommonOpts copt;

    // threshold
    auto* th = app.add_subcommand("threshold", "critical numbers k0 for a given n");
    long long th_n = 0;
    int th_dim = 0;
    double th_alpha = 0.0;
    auto* th_no = th->add_option("--n", th_n, "partitioned total")->required();
    auto* th_do = th->add_option("--dim", th_dim, "dimension case (1 or 2)")->check(CLI::IsMember({1, 2}));
    auto* th_ao = th->add_option("--alpha", th_alpha, "spectral exponent in (0,1)");
    add_common(th, copt);
    (void)th_no;

    // solve
    auto* sv = app.add_subcommand("solve", "solve the (b, kappa) system");
    long long sv_n = 0, sv_k = 0;
    double sv_alpha = 1.0;
    std::string sv_mode = "integral";
    sv->add_option("--n", sv_n)->required();
    sv->add_option("--k", sv_k)->required();
    sv->add_option("--alpha", sv_alpha);
    sv->add_option("--mode", sv_mode)->check(CLI::IsMember({"integral", "discrete"}));
    add_common(sv, copt);

    // partition-sample
    auto* pssub = app.add_subcommand("partition-sample", "uniform random partitions");
    long long ps_n = 0, ps_k = 0, ps_samples = 1;
    std::uint64_t ps_seed = 0;
    bool ps_exact = false, ps_full = false;
    std::string ps_cache;
    pssub->add_option("--n", ps_n)->required();
    pssub->add_option("--k", ps_k)->required();
    pssub->add_option("--samples", ps_samples);
    auto* ps_seed_opt = pssub->add_option("--seed", ps_seed, "required for stochastic runs");
    pssub->add_flag("--exactly-k", ps_exact, "sample partitions into exactly k parts");
    pssub->add_flag("--full", ps_full, "emit full occupancy maps");
    pssub->add_option("--cache-file", ps_cache, "write the table cache here");
    add_common(pssub, copt);

    // condense
    auto* cd = app.add_subcommand("condense", "condensate experiment runner");
    long long cd_n = 0, cd_samples = 200;
    std::string cd_k = "auto3";
    std::uint64_t cd_seed = 0;
    std::string cd_phi = "exp";
    cd->add_option("--n", cd_n)->required();
    cd->add_option("--k", cd_k, "part budget, integer or auto3 (= 3 k0)");
    cd->add_option("--samples", cd_samples);
    auto* cd_seed_opt = cd->add_option("--seed", cd_seed, "required");
    cd->add_option("--phi", cd_phi)->check(CLI::IsMember({"exp", "one"}));
    add_common(cd, copt);

    // debt
    auto* db = app.add_subcommand("debt", "debt-crisis verdict from a size,duration csv");
    std::string db_input, db_plot;
    double db_window = 0.0, db_fill = 0.0, db_wfactor = 3.0, db_stretch = 0.0;
    long long db_wstart = 1;
    db->add_option("--input", db_input)->required();
    db->add_option("--window", db_window, "bucketing window, days (required)")->required();
    db->add_option("--fill", db_fill, "virtual-fill granularity, days (0 = off)");
    db->add_option("--window-start", db_wstart, "first rank of the b-estimation window");
    db->add_option("--window-factor", db_wfactor, "window is [s, a s]");
    db->add_option("--stretch", db_stretch, "sweep durations (i >= 2) by rho in [1, stretch]");
    db->add_option("--plot-out", db_plot, "write (x, lambda) and (l, E) csv here");
    add_common(db, copt);

    // flicker
    auto* fl = app.add_subcommand("flicker", "explosive flicker-noise verdict from a series csv");
    std::string fl_input, fl_spec_out;
    fl->add_option("--input", fl_input)->required();
    fl->add_option("--spectrum-out", fl_spec_out, "write i,a_i,A_l csv here");
    add_common(fl, copt);

    // constants
    auto* cn = app.add_subcommand("constants", "dump quadrature constants with error estimates");
    std::vector<double> cn_alphas;
    cn->add_option("--alpha", cn_alphas, "exponents to tabulate");
    add_common(cn, copt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fflush(stdout);
        JsonWriter w;
        w.field("error", "usage");
        w.field("message", e.what());
        std::fprintf(stderr, "%s\n", w.str().c_str());
        return 2;
    }

    try {
        copt.apply_config();
        if (*th) {
            bool have_alpha = th_ao->count() > 0;
            int dim_eff = th_do->count() > 0 ? th_dim : 0;
            if (have_alpha && dim_eff) throw CLI::ValidationError("give --alpha or --dim, not both");
            return cmd_threshold(th_n, dim_eff, th_alpha, have_alpha, copt);
        }
        if (*sv) return cmd_solve(sv_n, sv_k, sv_alpha, sv_mode);
        if (*pssub) {
            if (ps_seed_opt->count() == 0)
                return fail_json("usage", "partition-sample requires --seed", 2);
            std::string cache = ps_cache;
            if (cache.empty()) {
                const char* dir = std::getenv("PARASTAT_CACHE_DIR");
                if (dir && *dir)
                    cache = std::string(dir) + "/pktb_" + std::to_string(ps_n) + "_" +
                            std::to_string(ps_k) + ".bin";
            }
            return cmd_partition_sample(ps_n, ps_k, ps_samples, ps_seed, ps_exact, ps_full, cache);
        }
        if (*cd) {
            if (cd_seed_opt->count() == 0) return fail_json("usage", "condense requires --seed", 2);
            return cmd_condense(cd_n, cd_k, cd_samples, cd_seed, cd_phi);
        }
        if (*db)
            return cmd_debt(db_input, db_window, db_fill, db_wstart, db_wfactor, db_stretch,
                            db_plot, copt);
        if (*fl) return cmd_flicker(fl_input, copt.format, copt.s_tilde_analogy, fl_spec_out);
        if (*cn) return cmd_constants(cn_alphas);
    } catch (const CLI::ValidationError& e) {
        return fail_json("usage", e.what(), 2);
    } catch (const ps::BudgetExceeded& e) {
        return fail_json("budget", e.what(), 3);
    } catch (const ps::NonPositiveValue& e) {
        return fail_json("data", e.what(), 4);
    } catch (const ps::InsufficientData& e) {
        return fail_json("data", e.what(), 4);
    } catch (const ps::DegenerateSeries& e) {
        return fail_json("data", e.what(), 4);
    } catch (const ps::IllConditionedFit& e) {
        return fail_json("data", e.what(), 4);
    } catch (const ps::NoConvergence& e) {
        return fail_json("no-convergence", e.what(), 5);
    } catch (const ps::DivergenceUndetermined& e) {
        return fail_json("no-convergence", e.what(), 5);
    } catch (const ps::Error& e) {
        return fail_json("data", e.what(), 4);
    } catch (const std::exception& e) {
        return fail_json("internal", e.what(), 1);
    }
    return 0;
}
