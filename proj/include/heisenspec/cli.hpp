#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conditions.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "mellin.hpp"
#include "nilmanifold.hpp"
#include "spectrum.hpp"
#include "version.hpp"
#include "weyl.hpp"

namespace heisenspec::cli {

struct cli_result {
    int exit_code = 0;
    std::string doc;  // JSON envelope, CSV table, or help text
};

namespace detail {

using io::ordered_json;

inline ordered_json envelope(ordered_json params, ordered_json result) {
    ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["params"] = std::move(params);
    j["result"] = std::move(result);
    return j;
}

inline ordered_json error_doc(const char* code, const std::string& msg) {
    ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["error"] = code;
    j["detail"] = msg;
    return j;
}

inline ordered_json witness_json(const condition_verdict& v) {
    if (v.pass) return nullptr;
    ordered_json w;
    w["mu_index"] = v.mu_index;
    ordered_json mu;
    mu["re"] = v.offending.real();
    mu["im"] = v.offending.imag();
    w["mu"] = std::move(mu);
    w["distance"] = v.distance;
    w["note"] = v.note;
    return w;
}

}  // namespace detail

// Parses and runs one invocation.  Never throws; never exits the process.
inline cli_result run(const std::vector<std::string>& args) {
    using detail::envelope;
    using io::ordered_json;

    CLI::App app{"numerical spectral geometry of the model nilpotent group"};
    app.require_subcommand(1);

    // nu
    auto* c_nu = app.add_subcommand("nu", "spectral density constant nu(mu)");
    int nu_n = 0;
    double nu_mu = 0, nu_rel = 1e-10;
    c_nu->add_option("--n", nu_n)->required();
    c_nu->add_option("--mu", nu_mu)->required();
    c_nu->add_option("--rel-tol", nu_rel);

    // heat-kernel
    auto* c_hk = app.add_subcommand("heat-kernel", "model heat kernel value");
    int hk_n = 0;
    double hk_mu = 0, hk_x0 = 0, hk_r2 = 0, hk_t = 0, hk_rel = 1e-10;
    c_hk->add_option("--n", hk_n)->required();
    c_hk->add_option("--mu", hk_mu)->required();
    c_hk->add_option("--x0", hk_x0)->required();
    c_hk->add_option("--r2", hk_r2)->required();
    c_hk->add_option("--t", hk_t)->required();
    c_hk->add_option("--rel-tol", hk_rel);

    // check
    auto* c_ck = app.add_subcommand("check", "hypoellipticity and invertibility conditions");
    std::string ck_file, ck_cond;
    int ck_kappa = 0, ck_p = -1, ck_q = -1, ck_k = -1;
    c_ck->add_option("--file", ck_file)->required();
    c_ck->add_option("--condition", ck_cond)
        ->required()
        ->check(CLI::IsMember({"rockland", "weaker", "Yq", "Xk", "Ypq"}));
    c_ck->add_option("--kappa", ck_kappa);
    c_ck->add_option("--p", ck_p);
    c_ck->add_option("--q", ck_q);
    c_ck->add_option("--k", ck_k);

    // weyl-table
    auto* c_wt = app.add_subcommand("weyl-table", "counting coefficient tables");
    std::string wt_coeff, wt_format = "csv", wt_vc = "intro";
    int wt_n = 0, wt_kappa = 0;
    double wt_rel = 1e-10;
    c_wt->add_option("--coeff", wt_coeff)
        ->required()
        ->check(CLI::IsMember({"alpha", "beta", "gamma"}));
    c_wt->add_option("--n", wt_n)->required();
    c_wt->add_option("--kappa", wt_kappa);
    c_wt->add_option("--rel-tol", wt_rel);
    c_wt->add_option("--format", wt_format)->check(CLI::IsMember({"csv", "json"}));
    c_wt->add_option("--volume-convention", wt_vc)->check(CLI::IsMember({"intro", "section8"}));

    // predict
    auto* c_pr = app.add_subcommand("predict", "leading-order spectral predictions");
    int pr_d = 0, pr_m = 0;
    double pr_nu0 = 0;
    std::optional<double> pr_lambda, pr_t;
    std::optional<double> pr_k;
    c_pr->add_option("--d", pr_d)->required();
    c_pr->add_option("--m", pr_m)->required();
    c_pr->add_option("--nu0", pr_nu0)->required();
    auto* o_lam = c_pr->add_option("--lambda", pr_lambda);
    auto* o_k = c_pr->add_option("--k", pr_k);
    auto* o_t = c_pr->add_option("--t", pr_t);
    o_lam->excludes(o_k)->excludes(o_t);
    o_k->excludes(o_t);

    // karamata
    auto* c_ka = app.add_subcommand("karamata", "two-term small-time trace fit");
    std::string ka_samples;
    int ka_d = 0, ka_m = 0;
    c_ka->add_option("--samples", ka_samples)->required();
    c_ka->add_option("--d", ka_d)->required();
    c_ka->add_option("--m", ka_m)->required();

    // mellin
    auto* c_me = app.add_subcommand("mellin", "matrix power by subordination");
    std::string me_matrix;
    double me_s = 0;
    c_me->add_option("--matrix", me_matrix)->required();
    c_me->add_option("--s", me_s)->required();

    // nilmanifold
    auto* c_ni = app.add_subcommand("nilmanifold", "lattice quotient spectrum");
    int ni_n = 0, ni_count = 0;
    double ni_mu = 0;
    c_ni->add_option("--N", ni_n)->required();
    c_ni->add_option("--count", ni_count)->required();
    c_ni->add_option("--mu", ni_mu);

    // mass
    auto* c_ma = app.add_subcommand("mass", "truncated kernel mass");
    int ma_n = 0;
    double ma_t = 0, ma_trunc = 0, ma_rel = 1e-6;
    c_ma->add_option("--n", ma_n)->required();
    c_ma->add_option("--t", ma_t)->required();
    c_ma->add_option("--trunc", ma_trunc)->required();
    c_ma->add_option("--rel-tol", ma_rel);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(tool_name);
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream help;
        help << app.help();
        return {0, help.str()};
    } catch (const CLI::ParseError& e) {
        return {2, io::write_json(detail::error_doc("ParseError", e.what()))};
    }

    try {
        if (*c_nu) {
            quad_result r = nu(nu_n, nu_mu, nu_rel);
            ordered_json params{{"n", nu_n}, {"mu", nu_mu}, {"rel_tol", nu_rel}};
            ordered_json result{{"value", r.value}, {"est_error", r.est_error}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_hk) {
            heat_query q{hk_n, hk_mu, hk_x0, hk_r2, hk_t, hk_rel};
            kernel_value kv = heat_kernel(q);
            ordered_json params{{"n", hk_n}, {"mu", hk_mu}, {"x0", hk_x0},
                                {"r2", hk_r2}, {"t", hk_t},  {"rel_tol", hk_rel}};
            ordered_json val{{"re", kv.value.real()}, {"im", kv.value.imag()}};
            ordered_json result{{"value", val}, {"est_error", kv.est_error}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_ck) {
            const model_data model = io::model_from_json(io::load_json(ck_file));
            ordered_json params{{"file", ck_file}, {"condition", ck_cond}};
            condition_verdict v;
            bool have_verdict = false;
            ordered_json result;
            if (ck_cond == "rockland") {
                v = check_rockland(model);
                have_verdict = true;
            } else if (ck_cond == "weaker") {
                v = check_weaker(model);
                have_verdict = true;
            } else {
                if (model.levi.d % 2 != 0)
                    throw range_violation("check: model dimension d must be even for this condition");
                const int n = model.levi.d / 2;
                const int r = model.levi.rank / 2;
                bool pass = false;
                if (ck_cond == "Yq") {
                    if (ck_q < 0) throw range_violation("check Yq: --q is required");
                    params["kappa"] = ck_kappa;
                    params["q"] = ck_q;
                    pass = y_condition(n, ck_kappa, r, ck_q);
                } else if (ck_cond == "Xk") {
                    if (ck_k < 0) throw range_violation("check Xk: --k is required");
                    params["k"] = ck_k;
                    pass = x_condition(model.levi.d, model.levi.rank, ck_k);
                } else {
                    if (ck_p < 0 || ck_q < 0)
                        throw range_violation("check Ypq: --p and --q are required");
                    params["kappa"] = ck_kappa;
                    params["p"] = ck_p;
                    params["q"] = ck_q;
                    pass = ypq_condition(n, ck_kappa, r, ck_p, ck_q);
                }
                result["condition"] = ck_cond;
                result["pass"] = pass;
                result["witness"] = nullptr;
                if (!pass) {
                    ordered_json w;
                    w["note"] = "degree lies in the excluded window";
                    result["witness"] = std::move(w);
                }
            }
            if (have_verdict) {
                result["condition"] = ck_cond;
                result["pass"] = v.pass;
                result["witness"] = detail::witness_json(v);
            }
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_wt) {
            const volume_convention vc =
                wt_vc == "section8" ? volume_convention::section8 : volume_convention::intro;
            std::vector<table_row> rows;
            if (wt_coeff == "alpha")
                rows = alpha_table(wt_n, wt_kappa, wt_rel, vc);
            else if (wt_coeff == "beta")
                rows = beta_table(wt_n, wt_kappa, wt_rel, vc);
            else
                rows = gamma_table(wt_n, wt_rel);
            if (wt_format == "csv") return {0, io::table_to_csv(wt_coeff, rows)};
            ordered_json params{{"coeff", wt_coeff}, {"n", wt_n}, {"rel_tol", wt_rel},
                                {"volume_convention", wt_vc}};
            if (wt_coeff != "gamma") params["kappa"] = wt_kappa;
            ordered_json result{{"rows", io::table_to_json(wt_coeff, rows)}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_pr) {
            predict_mode mode;
            double arg = 0;
            std::string mode_name;
            if (pr_lambda) {
                mode = predict_mode::counting;
                arg = *pr_lambda;
                mode_name = "counting";
            } else if (pr_k) {
                mode = predict_mode::eigenvalue;
                arg = *pr_k;
                mode_name = "eigenvalue";
            } else if (pr_t) {
                mode = predict_mode::heat;
                arg = *pr_t;
                mode_name = "heat";
            } else {
                throw range_violation("predict: exactly one of --lambda, --k, --t is required");
            }
            const double v = weyl_prediction(pr_d, pr_m, pr_nu0, mode, arg);
            ordered_json params{{"d", pr_d}, {"m", pr_m}, {"nu0", pr_nu0},
                                {"mode", mode_name}, {"arg", arg}};
            ordered_json result{{"value", v}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_ka) {
            const auto samples = io::trace_samples_from_csv(ka_samples);
            karamata_result r = karamata_fit(samples, ka_d, ka_m);
            ordered_json params{{"samples", ka_samples}, {"d", ka_d}, {"m", ka_m}};
            ordered_json result{{"nu0", r.nu0}, {"a0", r.a0}, {"a1", r.a1},
                                {"quality", r.quality}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_me) {
            const matrix_operator op = io::operator_from_json(io::load_json(me_matrix));
            Eigen::MatrixXd r = mellin_power_real(op, me_s);
            ordered_json params{{"matrix", me_matrix}, {"s", me_s}};
            ordered_json result{{"matrix", io::matrix_to_json(r)}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_ni) {
            nilmanifold_result r = nilmanifold_spectrum(ni_n, ni_count, ni_mu);
            ordered_json params{{"N", ni_n}, {"count", ni_count}, {"mu", ni_mu}};
            ordered_json eigs = ordered_json::array();
            for (double v : r.eigenvalues) eigs.push_back(v);
            ordered_json result{{"N", r.n_grid},
                                {"mu", r.mu},
                                {"count", ni_count},
                                {"eigenvalues", std::move(eigs)},
                                {"wallclock", r.wallclock}};
            return {0, io::write_json(envelope(params, result))};
        }
        if (*c_ma) {
            quad_result r = total_mass(ma_n, ma_t, ma_trunc, ma_rel);
            ordered_json params{{"n", ma_n}, {"t", ma_t}, {"trunc", ma_trunc},
                                {"rel_tol", ma_rel}};
            ordered_json result{{"value", r.value}, {"est_error", r.est_error}};
            return {0, io::write_json(envelope(params, result))};
        }
    } catch (const error& e) {
        return {e.exit_code(), io::write_json(detail::error_doc(e.code(), e.what()))};
    } catch (const std::exception& e) {
        return {3, io::write_json(detail::error_doc("InternalFault", e.what()))};
    }
    return {2, io::write_json(detail::error_doc("ParseError", "no subcommand given"))};
}

}
