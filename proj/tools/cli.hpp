#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freebeta/freebeta.hpp"

namespace freebeta::cli {

using json = nlohmann::ordered_json;

inline constexpr const char *schema_version = "1.0";

enum exit_code : int { ok = 0, usage = 2, verification_failed = 3 };

namespace detail {

struct family_options {
    std::string name = "fbp";
    std::string a = "2";
    std::string b = "3";
    std::string m = "2";
    std::string lambda = "1";
    double theta = 0;
    double tau = 0;
};

inline void add_family_options(CLI::App *cmd, family_options &f)
{
    cmd->add_option("--family", f.name, "fbp | ff | ft | fb | fp | ifp | meixner")->capture_default_str();
    cmd->add_option("--a", f.a, "parameter a (rational)")->capture_default_str();
    cmd->add_option("--b", f.b, "parameter b (rational)")->capture_default_str();
    cmd->add_option("--m", f.m, "free T parameter m (rational)")->capture_default_str();
    cmd->add_option("--lambda", f.lambda, "free Poisson rate (rational)")->capture_default_str();
    cmd->add_option("--theta", f.theta, "free Meixner theta");
    cmd->add_option("--tau", f.tau, "free Meixner tau");
}

inline family make_family(const family_options &f)
{
    const std::string &n = f.name;
    if (n == "fbp" || n == "free-beta-prime") {
        return free_beta_prime(parse_rational(f.a), parse_rational(f.b));
    }
    if (n == "ff" || n == "free-f") {
        return free_f(parse_rational(f.a), parse_rational(f.b));
    }
    if (n == "ft" || n == "free-t") {
        return free_t(parse_rational(f.m));
    }
    if (n == "fb" || n == "free-beta") {
        return free_beta(parse_rational(f.a), parse_rational(f.b));
    }
    if (n == "fp" || n == "free-poisson") {
        return free_poisson(parse_rational(f.lambda));
    }
    if (n == "ifp" || n == "inverse-free-poisson") {
        return inverse_free_poisson(parse_rational(f.b));
    }
    if (n == "meixner" || n == "free-meixner") {
        return free_meixner_std(f.theta, f.tau);
    }
    throw error(errc::invalid_parameters, "unknown family '" + n + "'");
}

inline json family_params(const family &f)
{
    return std::visit(
        [](const auto &g) -> json {
            using T = std::decay_t<decltype(g)>;
            json j;
            j["family"] = family_name(g);
            if constexpr (std::is_same_v<T, free_poisson>) {
                j["lambda"] = to_fraction_string(g.lambda);
            } else if constexpr (std::is_same_v<T, inverse_free_poisson>) {
                j["b"] = to_fraction_string(g.b);
            } else if constexpr (std::is_same_v<T, free_t>) {
                j["m"] = to_fraction_string(g.m);
            } else if constexpr (std::is_same_v<T, free_meixner_std>) {
                j["theta"] = g.theta;
                j["tau"] = g.tau;
            } else {
                j["a"] = to_fraction_string(g.a);
                j["b"] = to_fraction_string(g.b);
            }
            return j;
        },
        f);
}

inline json atoms_json(const std::vector<atom> &atoms)
{
    json arr = json::array();
    for (const auto &a : atoms) {
        arr.push_back({{"location", a.location}, {"mass", a.mass}});
    }
    return arr;
}

inline json envelope(const std::string &command, json params, json results, json provenance)
{
    return {{"schema_version", schema_version},
            {"command", command},
            {"params", std::move(params)},
            {"results", std::move(results)},
            {"provenance", std::move(provenance)}};
}

/// Quotes a field containing separators or quotes.
inline std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

/// Writes rows as CSV; cells are taken verbatim from strings or printed as numbers.
inline void write_csv(std::ostream &out, const std::vector<std::string> &header, const json &rows)
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            const json &cell = row.at(header[i]);
            out << (i ? "," : "");
            if (cell.is_string()) {
                out << csv_field(cell.get<std::string>());
            } else if (cell.is_number_float()) {
                out << std::setprecision(17) << cell.get<double>();
            } else {
                out << cell.dump();
            }
        }
        out << '\n';
    }
}

struct output {
    std::string format = "json";
};

inline void emit(std::ostream &out, const output &o, const json &env, const std::vector<std::string> &csv_header,
                 const json &csv_rows)
{
    if (o.format == "csv" && !csv_header.empty()) {
        write_csv(out, csv_header, csv_rows);
    } else {
        out << env.dump(2) << '\n';
    }
}

inline std::size_t to_size(long long v, const char *what)
{
    if (v < 0) {
        throw error(errc::invalid_parameters, std::string(what) + " must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

} // namespace detail

/// Runs one command; args exclude the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    using namespace detail;
    CLI::App app{"Exact and numerical computations for the free beta prime family and its relatives"};
    app.require_subcommand(1);
    app.fallthrough();
    output o;
    app.add_option("--format", o.format, "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    family_options fam;
    long long n = 5;
    std::string route = "all";

    auto *moments = app.add_subcommand("moments", "moments m_1..m_n as exact rationals");
    add_family_options(moments, fam);
    moments->add_option("--n", n, "highest moment")->capture_default_str();
    moments->add_option("--route", route, "ncl | series | fock | all")
        ->check(CLI::IsMember({"ncl", "series", "fock", "all"}))
        ->capture_default_str();

    auto *density = app.add_subcommand("density", "closed-form density on a grid over the support");
    add_family_options(density, fam);
    long long points = 101;
    density->add_option("--points", points, "grid size")->capture_default_str();

    auto *support = app.add_subcommand("support", "support interval and atoms");
    add_family_options(support, fam);

    auto *enumerate = app.add_subcommand("enumerate-ncl", "enumerate non-crossing linked partitions");
    enumerate->add_option("--n", n, "ground set size")->capture_default_str();
    bool list = false;
    bool unlinked = false;
    enumerate->add_flag("--list", list, "print every partition");
    enumerate->add_flag("--nc", unlinked, "ordinary non-crossing partitions only");

    auto *stats = app.add_subcommand("ncl-stats", "(dc, sc, sg) of a partition, or their census over NCL(n)");
    stats->add_option("--n", n, "ground set size")->capture_default_str();
    std::string partition_text;
    stats->add_option("--partition", partition_text, "blocks such as {{1,2},{2,3}}");

    auto *gamma_gf = app.add_subcommand("gamma-gf", "coefficients of the (dc, sc, sg) generating function");
    std::string alpha_s = "1";
    std::string beta_s = "1";
    std::string gamma_s = "1";
    gamma_gf->add_option("--alpha", alpha_s)->capture_default_str();
    gamma_gf->add_option("--beta", beta_s)->capture_default_str();
    gamma_gf->add_option("--gamma", gamma_s)->capture_default_str();
    gamma_gf->add_option("--n", n, "highest coefficient")->capture_default_str();
    gamma_gf->add_option("--route", route, "brute | cf | closed | all")
        ->check(CLI::IsMember({"brute", "cf", "closed", "all"}))
        ->capture_default_str();

    auto *tco = app.add_subcommand("t-coeffs", "T-transform coefficients of the free beta prime law");
    tco->add_option("--a", fam.a)->capture_default_str();
    tco->add_option("--b", fam.b)->capture_default_str();
    long long order = 6;
    tco->add_option("--order", order)->capture_default_str();

    auto *meixner = app.add_subcommand("meixner", "free Meixner parameters and class");
    meixner->add_option("--a", fam.a)->capture_default_str();
    meixner->add_option("--b", fam.b)->capture_default_str();
    std::optional<double> theta_only;
    std::optional<double> tau_only;
    meixner->add_option("--theta", theta_only, "classify (theta, tau) directly");
    meixner->add_option("--tau", tau_only, "classify (theta, tau) directly");

    auto *score = app.add_subcommand("score-check", "free score 2Hf against the classical potential V'");
    add_family_options(score, fam);
    points = 20;
    score->add_option("--points", points, "interior grid size")->capture_default_str();

    auto *fisher = app.add_subcommand("mc-fisher", "Fisher matrix spectrum against the free F law");
    long long p = 200;
    double fa = 2;
    double fb = 3;
    std::uint64_t seed = 42;
    long long bins = 30;
    bool eigen_out = false;
    fisher->add_option("--p", p)->capture_default_str();
    fisher->add_option("--a", fa)->capture_default_str();
    fisher->add_option("--b", fb)->capture_default_str();
    fisher->add_option("--seed", seed)->capture_default_str();
    fisher->add_option("--bins", bins)->capture_default_str();
    fisher->add_flag("--eigenvalues", eigen_out, "include the eigenvalues in the JSON output");

    auto *verify_cmd = app.add_subcommand("verify", "run the full cross-route verification suite");
    bool keep_going = false;
    verify_cmd->add_flag("--keep-going", keep_going, "run every check even after a failure");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << '\n';
        return exit_code::usage;
    }

    try {
        if (moments->parsed()) {
            const family f = make_family(fam);
            const std::size_t nmax = to_size(n, "--n");
            const bool is_fbp = std::holds_alternative<free_beta_prime>(f);
            const bool want_ncl = (route == "all" || route == "ncl") && is_fbp;
            const bool want_fock = (route == "all" || route == "fock") && is_fbp;
            const bool want_series = route == "all" || route == "series";
            if (!is_fbp && route != "all" && route != "series") {
                throw error(errc::unsupported_family, "route '" + route + "' exists only for the free beta prime law");
            }
            std::optional<power_series> series;
            std::vector<rational> fock;
            if (want_series) {
                series = moment_series(f, nmax);
            }
            if (want_fock) {
                const auto &g = std::get<free_beta_prime>(f);
                fock = fbp_operator(g.a, g.b, std::max<std::size_t>(nmax, 1)).vacuum_moments(nmax);
            }
            json rows = json::array();
            json routes_used = json::array();
            if (want_ncl) routes_used.push_back("ncl");
            if (want_series) routes_used.push_back("series");
            if (want_fock) routes_used.push_back("fock");
            for (std::size_t k = 1; k <= nmax; ++k) {
                json row{{"n", k}};
                std::vector<rational> values;
                if (want_ncl) {
                    const auto &g = std::get<free_beta_prime>(f);
                    values.push_back(fbp_moment(g.a, g.b, k));
                    row["ncl"] = to_fraction_string(values.back());
                }
                if (want_series) {
                    values.push_back((*series)[k]);
                    row["series"] = to_fraction_string(values.back());
                }
                if (want_fock) {
                    values.push_back(fock[k]);
                    row["fock"] = to_fraction_string(values.back());
                }
                row["agree"] = std::all_of(values.begin(), values.end(), [&](const rational &v) { return v == values[0]; });
                rows.push_back(row);
            }
            json params = family_params(f);
            params["n"] = nmax;
            params["route"] = route;
            std::vector<std::string> header{"n"};
            for (const auto &r : routes_used) header.push_back(r.get<std::string>());
            header.push_back("agree");
            emit(out, o, envelope("moments", params, {{"moments", rows}}, {{"routes", routes_used}}), header, rows);
        } else if (density->parsed()) {
            const family f = make_family(fam);
            const measure_spec spec = measure_of(f);
            const std::size_t k = std::max<std::size_t>(to_size(points, "--points"), 2);
            json rows = json::array();
            for (std::size_t i = 0; i < k; ++i) {
                const double x = spec.support.lo + spec.support.width() * static_cast<double>(i) / static_cast<double>(k - 1);
                rows.push_back({{"x", x}, {"density", spec.density(x)}});
            }
            json params = family_params(f);
            params["points"] = k;
            json results{{"support", {spec.support.lo, spec.support.hi}}, {"atoms", atoms_json(spec.atoms)}, {"grid", rows}};
            emit(out, o, envelope("density", params, results, {{"routes", {"closed-form density"}}}), {"x", "density"}, rows);
        } else if (support->parsed()) {
            const family f = make_family(fam);
            const interval s = support_of(f);
            json results{{"lo", s.lo}, {"hi", s.hi}};
            if (!std::holds_alternative<free_meixner_std>(f)) {
                results["atoms"] = atoms_json(atoms_of(f));
            }
            json rows = json::array({{{"lo", s.lo}, {"hi", s.hi}}});
            emit(out, o, envelope("support", family_params(f), results, {{"routes", {"closed-form endpoints"}}}),
                 {"lo", "hi"}, rows);
        } else if (enumerate->parsed()) {
            const std::size_t size = to_size(n, "--n");
            const auto parts = enumerate_ncl(size, !unlinked);
            json rows = json::array();
            json results{{"count", parts.size()}};
            if (list) {
                for (const auto &part : parts) {
                    const auto s = statistics(part);
                    rows.push_back({{"partition", part.to_string()}, {"dc", s.dc}, {"sc", s.sc}, {"sg", s.sg}});
                }
                results["partitions"] = rows;
            }
            json params{{"n", size}, {"kind", unlinked ? "NC" : "NCL"}, {"list", list}};
            emit(out, o, envelope("enumerate-ncl", params, results, {{"routes", {"motzkin-path card expansion"}}}),
                 list ? std::vector<std::string>{"partition", "dc", "sc", "sg"} : std::vector<std::string>{}, rows);
        } else if (stats->parsed()) {
            json params{{"n", n}};
            if (!partition_text.empty()) {
                const linked_partition part = parse_partition(to_size(n, "--n"), partition_text).canonical();
                params["partition"] = partition_text;
                const bool valid = validate_ncl(part);
                json results{{"valid", valid}};
                json rows = json::array();
                if (valid) {
                    const auto s = statistics(part);
                    const auto split = classify_doubly_covered(part);
                    results["dc"] = s.dc;
                    results["sc"] = s.sc;
                    results["sg"] = s.sg;
                    results["doubly_covered_type_one"] = split.type_one;
                    results["doubly_covered_type_two"] = split.type_two;
                    results["cards"] = to_string(arrangement_of(part));
                    rows.push_back({{"dc", s.dc}, {"sc", s.sc}, {"sg", s.sg}});
                }
                emit(out, o, envelope("ncl-stats", params, results, {{"routes", {"direct"}}}),
                     valid ? std::vector<std::string>{"dc", "sc", "sg"} : std::vector<std::string>{}, rows);
            } else {
                const auto &c = census(to_size(n, "--n"));
                json rows = json::array();
                for (const auto &[s, count] : c.by_statistics) {
                    rows.push_back({{"dc", s.dc}, {"sc", s.sc}, {"sg", s.sg}, {"count", count}});
                }
                emit(out, o,
                     envelope("ncl-stats", params, {{"total", c.count}, {"census", rows}},
                              {{"routes", {"motzkin-path card expansion"}}}),
                     {"dc", "sc", "sg", "count"}, rows);
            }
        } else if (gamma_gf->parsed()) {
            const rational al = parse_rational(alpha_s);
            const rational be = parse_rational(beta_s);
            const rational ga = parse_rational(gamma_s);
            const std::size_t nmax = to_size(n, "--n");
            std::vector<std::string> routes;
            if (route == "all") {
                routes = {"cf", "closed"};
                if (nmax <= max_enumeration_size) {
                    routes.insert(routes.begin(), "brute");
                }
            } else {
                routes = {route};
            }
            std::optional<power_series> cf;
            std::optional<power_series> closed;
            for (const auto &r : routes) {
                if (r == "cf") cf = weighted_motzkin_scheme::ncl_statistics(al, be, ga).generating_function(nmax);
                if (r == "closed") closed = gamma_closed_form_series(al, be, ga, nmax);
            }
            json rows = json::array();
            for (std::size_t k = 0; k <= nmax; ++k) {
                json row{{"n", k}};
                std::vector<rational> values;
                for (const auto &r : routes) {
                    rational v = r == "brute" ? gamma_poly(k, al, be, ga, gamma_route::brute)
                                              : (r == "cf" ? (*cf)[k] : (*closed)[k]);
                    row[r] = to_fraction_string(v);
                    values.push_back(v);
                }
                row["agree"] = std::all_of(values.begin(), values.end(), [&](const rational &v) { return v == values[0]; });
                rows.push_back(row);
            }
            json results{{"coefficients", rows}};
            if (closed) {
                results["quadratic_residual_zero"] = gamma_quadratic_residual(*closed, al, be, ga).is_zero();
            }
            json params{{"alpha", to_fraction_string(al)}, {"beta", to_fraction_string(be)},
                        {"gamma", to_fraction_string(ga)}, {"n", nmax}, {"route", route}};
            std::vector<std::string> header{"n"};
            header.insert(header.end(), routes.begin(), routes.end());
            header.push_back("agree");
            emit(out, o, envelope("gamma-gf", params, results, {{"routes", routes}}), header, rows);
        } else if (tco->parsed()) {
            const free_beta_prime f(parse_rational(fam.a), parse_rational(fam.b));
            const std::size_t k = to_size(order, "--order");
            const auto direct = t_coeffs_of(f, k);
            const auto via_s = s_to_t(s_transform_of(f, k));
            json rows = json::array();
            for (std::size_t i = 0; i <= k; ++i) {
                rows.push_back({{"k", i}, {"alpha", to_fraction_string(direct[i])}, {"agree", direct[i] == via_s[i]}});
            }
            json params{{"a", to_fraction_string(f.a)}, {"b", to_fraction_string(f.b)}, {"order", k}};
            emit(out, o, envelope("t-coeffs", params, {{"alphas", rows}}, {{"routes", {"closed form", "reciprocal of S"}}}),
                 {"k", "alpha", "agree"}, rows);
        } else if (meixner->parsed()) {
            if (theta_only || tau_only) {
                if (!theta_only || !tau_only) {
                    throw error(errc::invalid_parameters, "--theta and --tau must be given together");
                }
                const auto c = classify_meixner(*theta_only, *tau_only);
                json results{{"discriminant", *theta_only * *theta_only - 4 * *tau_only}, {"class", to_string(c)}};
                json rows = json::array({results});
                emit(out, o, envelope("meixner", {{"theta", *theta_only}, {"tau", *tau_only}}, results, {{"routes", {"sign rule"}}}),
                     {"discriminant", "class"}, rows);
            } else {
                const rational a = parse_rational(fam.a);
                const rational b = parse_rational(fam.b);
                const auto mp = standardize_to_meixner(a, b);
                json results{{"theta", mp.theta},
                             {"tau", mp.tau},
                             {"theta_squared", to_fraction_string(mp.theta_squared)},
                             {"tau_exact", to_fraction_string(mp.tau_exact)},
                             {"discriminant", to_fraction_string(mp.discriminant)},
                             {"mean", mp.mean},
                             {"variance", mp.variance},
                             {"class", to_string(classify_meixner_exact(mp.theta_squared, mp.tau_exact))}};
                json rows = json::array({results});
                emit(out, o,
                     envelope("meixner", {{"a", to_fraction_string(a)}, {"b", to_fraction_string(b)}}, results,
                              {{"routes", {"standardization", "exact sign rule"}}}),
                     {"theta", "tau", "discriminant", "class"}, rows);
            }
        } else if (score->parsed()) {
            const family f = make_family(fam);
            const std::size_t k = std::max<std::size_t>(to_size(points, "--points"), 2);
            json rows = json::array();
            double worst = 0;
            for (double x : verify::interior_grid(f, k)) {
                const double s = hilbert_score(f, x);
                const double v = potential_derivative(f, x);
                worst = std::max(worst, std::abs(s - v));
                rows.push_back({{"x", x}, {"score", s}, {"potential_derivative", v}, {"gap", std::abs(s - v)}});
            }
            json params = family_params(f);
            params["points"] = k;
            emit(out, o,
                 envelope("score-check", params, {{"max_gap", worst}, {"grid", rows}},
                          {{"routes", {"Richardson-extrapolated boundary values", "closed-form potential"}}}),
                 {"x", "score", "potential_derivative", "gap"}, rows);
        } else if (fisher->parsed()) {
            const fisher_sample_config cfg{to_size(p, "--p"), fa, fb, seed};
            const auto eigs = sample_fisher_spectrum(cfg);
            const family law = free_f(rational(fa), rational(fb));
            const double ks = ks_distance(eigs, law);
            const auto hist = spectrum_histogram(eigs, law, std::max<std::size_t>(to_size(bins, "--bins"), 1));
            if (o.format == "csv") {
                out << histogram_csv(hist);
            } else {
                json hj = json::array();
                for (const auto &h : hist) {
                    hj.push_back({{"bin_left", h.left}, {"bin_right", h.right}, {"empirical_density", h.empirical_density},
                                  {"theoretical_density", h.theoretical_density}});
                }
                json results{{"ks_distance", ks}, {"eigenvalue_count", eigs.size()},
                             {"min_eigenvalue", eigs.front()}, {"max_eigenvalue", eigs.back()},
                             {"support", {support_of(law).lo, support_of(law).hi}}, {"histogram", hj}};
                if (eigen_out) {
                    results["eigenvalues"] = eigs;
                }
                json params{{"p", cfg.p}, {"a", fa}, {"b", fb}, {"n1", cfg.n1()}, {"n2", cfg.n2()}, {"seed", seed}};
                out << envelope("mc-fisher", params, results,
                                {{"routes", {"splitmix64 Box-Muller", "Cholesky congruence", "Householder + implicit QL"}}})
                           .dump(2)
                    << '\n';
            }
        } else if (verify_cmd->parsed()) {
            const auto results = verify::run_all(!keep_going);
            json rows = json::array();
            bool all_ok = true;
            for (const auto &r : results) {
                all_ok = all_ok && r.passed;
                rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
                if (!r.passed) {
                    err << "verification failed: " << r.id << ' ' << r.title << ": " << r.detail << '\n';
                }
            }
            emit(out, o, envelope("verify", {{"fail_fast", !keep_going}}, {{"passed", all_ok}, {"checks", rows}},
                                  {{"routes", {"ncl", "series", "fock", "quadrature", "monte carlo"}}}),
                 {"id", "passed", "title", "detail"}, rows);
            return all_ok ? exit_code::ok : exit_code::verification_failed;
        }
    } catch (const error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }
    return exit_code::ok;
}

} // namespace freebeta::cli
