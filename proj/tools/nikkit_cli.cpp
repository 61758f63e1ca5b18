// Command-line front end: evaluate the branch functions, tabulate densities,
// run the identity verification suite, probe exponent pairs, and compute
// type-I simultaneous rational approximants.
//
// Exit codes: 0 success, 1 computation rejected (bad evaluation point,
// verification above tolerance), 2 usage or parameter errors.
#include <CLI11.hpp>

#include <nikkit/hermite_pade.hpp>
#include <nikkit/identities.hpp>
#include <nikkit/probe.hpp>
#include <nikkit/serialize.hpp>

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace nikkit;

struct global_options {
    double A1 = 1.5;
    double A2 = 3.0;
    double alpha1 = -0.5;
    double alpha2 = -0.5;
    std::optional<double> alpha; // antisymmetric shorthand: (alpha, -alpha)
    int nodes = 200;
    double tol = 1e-7;
    std::string format = "json";

    system_params params() const { return system_params{A1, A2}; }
    factor_exponents exponents() const {
        if (alpha) return factor_exponents{*alpha, -*alpha};
        return factor_exponents{alpha1, alpha2};
    }
};

cplx parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--point", "expected re,im, got '" + text + "'");
    std::size_t used = 0;
    double re = 0.0, im = 0.0;
    try {
        re = std::stod(text.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument(text);
        const std::string rest = text.substr(comma + 1);
        im = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--point", "expected re,im, got '" + text + "'");
    }
    return cplx(re, im);
}

std::string cformat(const cplx& z) {
    return "[" + format_double(z.real()) + "," + format_double(z.imag()) + "]";
}

int run_eval(const global_options& g, const std::vector<std::string>& point_args) {
    const system_params p = g.params();
    const factor_exponents e = g.exponents();
    std::vector<cplx> pts;
    pts.reserve(point_args.size());
    for (const auto& t : point_args) pts.push_back(parse_point(t));

    std::string out;
    if (g.format == "csv")
        out += "re_z,im_z,re_f,im_f,re_f2,im_f2,re_f3,im_f3,re_phi,im_phi,"
               "re_second_sheet,im_second_sheet\n";
    else
        out += "[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx z = pts[i];
        const cplx f = eval_f(p, e, z);
        const cplx f2 = f * f;
        const cplx f3 = f2 * f;
        const cplx ph = phi(z);
        const cplx ft = second_sheet_f(p, e, z);
        if (g.format == "csv") {
            const double vals[] = {z.real(),  z.imag(),  f.real(),  f.imag(),
                                   f2.real(), f2.imag(), f3.real(), f3.imag(),
                                   ph.real(), ph.imag(), ft.real(), ft.imag()};
            for (std::size_t k = 0; k < 12; ++k)
                out += (k ? "," : "") + format_double(vals[k]);
            out += "\n";
        } else {
            if (i) out += ",";
            out += "{\"point\":" + cformat(z) + ",\"f\":" + cformat(f) +
                   ",\"f2\":" + cformat(f2) + ",\"f3\":" + cformat(f3) +
                   ",\"phi\":" + cformat(ph) + ",\"second_sheet_f\":" + cformat(ft) + "}";
        }
    }
    if (g.format != "csv") out += "]\n";
    std::fputs(out.c_str(), stdout);
    return 0;
}

int run_density(const global_options& g, const std::string& name, int count) {
    const system_params p = g.params();
    measure_spec m = [&] {
        if (name == "sigma") return make_sigma(p);
        if (name == "sigma2") return make_sigma2(p);
        if (name == "sigma3") return make_sigma3(p);
        if (name == "s") return make_s(p, g.nodes);
        if (name == "s1") return make_s1(p, g.nodes);
        if (name == "s2") return make_s2(p, g.nodes);
        throw std::invalid_argument("density: unknown measure '" + name + "'");
    }();
    std::string out = "x,density\n";
    for (int i = 0; i < count; ++i) {
        const double x =
            m.support.lo + (i + 0.5) / static_cast<double>(count) * (m.support.hi - m.support.lo);
        out += format_double(x) + "," + format_double(density(m, x)) + "\n";
    }
    std::fputs(out.c_str(), stdout);
    return 0;
}

int run_verify(const global_options& g, int threads) {
    const system_params p = g.params();
    verify_config cfg;
    cfg.node_count = g.nodes;
    cfg.tolerance = g.tol;
    cfg.threads = threads;
    const auto reports = verify_all(p, cfg);
    if (g.format == "csv") {
        std::fputs(csv_reports(reports, g.tol).c_str(), stdout);
    } else {
        std::string out = "{\"reports\":" + to_json(reports, g.tol) +
                          ",\"sign_ledger\":" + to_json(sign_ledger(reports, p)) + "}\n";
        std::fputs(out.c_str(), stdout);
    }
    for (const auto& r : reports)
        if (!(r.max_residual <= g.tol)) return 1;
    return 0;
}

int run_probe(const global_options& g, int n) {
    const auto rep = nikishin_probe(g.params(), g.exponents(), n);
    std::fputs((to_json(rep) + "\n").c_str(), stdout);
    return 0;
}

int run_hp(const global_options& g, const std::vector<int>& multi, double radius, int samples,
           int terms) {
    const system_params p = g.params();
    f_power_hp hp =
        type_one_hp_f_powers(p, multi, circle_contour{radius, samples}, terms);
    const order_fit fit = remainder_order(hp, make_order_samples());
    hp.result.achieved_order = fit.slope;

    std::string out = "{\"multi_index\":[";
    for (std::size_t j = 0; j < multi.size(); ++j)
        out += (j ? "," : "") + std::to_string(multi[j]);
    out += "],\"target_order\":" + std::to_string(hp.result.target_order);
    out += ",\"achieved_order\":" + format_double(hp.result.achieved_order);
    out += ",\"order_fit_residual\":" + format_double(fit.fit_residual);
    out += ",\"condition_indicator\":" + format_double(hp.result.condition_indicator);
    out += std::string(",\"degenerate\":") + (hp.result.degenerate ? "true" : "false");
    out += ",\"polynomials\":[";
    for (std::size_t j = 0; j < hp.result.polynomial_coefficients.size(); ++j) {
        if (j) out += ",";
        out += "[";
        const auto& block = hp.result.polynomial_coefficients[j];
        for (std::size_t i = 0; i < block.size(); ++i)
            out += (i ? "," : "") + format_double(block[i]);
        out += "]";
    }
    out += "]}\n";
    std::fputs(out.c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit Nikishin system toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // accept the shared flags after a subcommand name too

    global_options g;
    app.add_option("--a1", g.A1, "first pole parameter A1 (> 1)")->capture_default_str();
    app.add_option("--a2", g.A2, "second pole parameter A2 (> A1)")->capture_default_str();
    app.add_option("--alpha1", g.alpha1, "exponent of the first factor")->capture_default_str();
    app.add_option("--alpha2", g.alpha2, "exponent of the second factor")->capture_default_str();
    double alpha_val = 0.0;
    auto* alpha_opt =
        app.add_option("--alpha", alpha_val, "antisymmetric exponent pair (alpha, -alpha)");
    app.add_option("--nodes", g.nodes, "quadrature nodes")
        ->capture_default_str()
        ->check(CLI::Range(8, 100000));
    app.add_option("--tol", g.tol, "verification tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));

    auto* eval_cmd = app.add_subcommand("eval", "evaluate f, its powers, phi, second sheet");
    std::vector<std::string> point_args;
    eval_cmd->add_option("--point", point_args, "evaluation point re,im (repeatable)")
        ->required()
        ->take_all();

    auto* density_cmd = app.add_subcommand("density", "tabulate a density as CSV");
    std::string measure_name;
    int count = 200;
    density_cmd->add_option("--measure", measure_name, "sigma|sigma2|sigma3|s|s1|s2")
        ->required()
        ->check(CLI::IsMember({"sigma", "sigma2", "sigma3", "s", "s1", "s2"}));
    density_cmd->add_option("--count", count, "sample count")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000000));

    auto* verify_cmd = app.add_subcommand("verify", "run the identity verification suite");
    int threads = 0;
    verify_cmd->add_option("--threads", threads, "worker threads (0 = NIKKIT_THREADS or 1)")
        ->capture_default_str()
        ->check(CLI::Range(0, 4096));

    auto* probe_cmd = app.add_subcommand("probe", "probe an exponent pair for the layered structure");
    int probe_n = 3;
    probe_cmd->add_option("--n", probe_n, "highest power to scan")
        ->capture_default_str()
        ->check(CLI::Range(1, 32));

    auto* hp_cmd = app.add_subcommand("hp", "type-I simultaneous rational approximation");
    std::string multi_text = "3,3,3";
    double radius = 2.0;
    int samples = 512;
    int terms = 60;
    hp_cmd->add_option("--multi", multi_text, "comma-separated degree multi-index")
        ->capture_default_str();
    hp_cmd->add_option("--radius", radius, "Laurent sampling radius")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    hp_cmd->add_option("--samples", samples, "contour sample count")
        ->capture_default_str()
        ->check(CLI::Range(16, 1 << 20));
    hp_cmd->add_option("--terms", terms, "Laurent coefficients per series")
        ->capture_default_str()
        ->check(CLI::Range(4, 4096));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }
    if (alpha_opt->count() > 0) g.alpha = alpha_val;

    try {
        if (*eval_cmd) return run_eval(g, point_args);
        if (*density_cmd) return run_density(g, measure_name, count);
        if (*verify_cmd) return run_verify(g, threads);
        if (*probe_cmd) return run_probe(g, probe_n);
        if (*hp_cmd) {
            std::vector<int> multi;
            for (std::size_t pos = 0; pos < multi_text.size();) {
                const auto comma = multi_text.find(',', pos);
                const auto end = comma == std::string::npos ? multi_text.size() : comma;
                multi.push_back(std::stoi(multi_text.substr(pos, end - pos)));
                pos = end + 1;
            }
            return run_hp(g, multi, radius, samples, terms);
        }
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2; // unreachable: a subcommand is required
}
