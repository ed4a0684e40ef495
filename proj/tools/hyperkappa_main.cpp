#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperkappa/kappa.hpp"
#include "hyperkappa/report.hpp"

namespace hk = hyperkappa;
using hk::Complex;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
    double tol = 1e-12;
    std::string out;
    std::uint64_t seed = 12345;
    int threads = 0;
};

struct CurveDocument {
    hk::Curve curve;
    std::string label;
};

std::vector<Complex> parse_complex_list(const nlohmann::json& arr, const char* what) {
    if (!arr.is_array()) throw hk::validation_error(std::string(what) + " must be an array");
    std::vector<Complex> out;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            throw hk::validation_error(std::string(what) +
                                       " entries must be [re, im] number pairs");
        out.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return out;
}

CurveDocument load_curve_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hk::validation_error("cannot open curve file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw hk::validation_error("curve file is not valid JSON: " + std::string(e.what()));
    }
    const bool has_coeffs = doc.contains("coefficients");
    const bool has_roots = doc.contains("roots");
    if (has_coeffs == has_roots)
        throw hk::validation_error(
            "curve document must contain exactly one of \"coefficients\" or \"roots\"");
    std::string label = doc.value("label", "");
    if (has_coeffs)
        return {hk::Curve::from_coefficients(parse_complex_list(doc["coefficients"], "coefficients")),
                label};
    return {hk::Curve::from_roots(parse_complex_list(doc["roots"], "roots")), label};
}

hk::Json curve_block(const hk::Curve& curve) {
    hk::Json block = hk::Json::object();
    block.set("genus", hk::Json::integer(curve.genus()));
    block.set("monic", hk::Json::boolean(curve.monic()));
    block.set("lambda", hk::Json::complex_list(curve.coefficients()));
    block.set("branch_points", hk::Json::complex_list(curve.branch_points()));
    return block;
}

hk::Json report_header(const std::string& command, const std::string& echo,
                       const CommonOptions& opts, const std::string& label) {
    hk::Json report = hk::Json::object();
    report.set("tool", hk::Json::text("hyperkappa"));
    report.set("version", hk::Json::text(kVersion));
    report.set("command", hk::Json::text(command));
    report.set("command_line", hk::Json::text(echo));
    if (!label.empty()) report.set("label", hk::Json::text(label));
    report.set("seed", hk::Json::integer(static_cast<long long>(opts.seed)));
    report.set("tol", hk::Json::real(opts.tol));
    return report;
}

void emit(const hk::Json& report, const CommonOptions& opts) {
    const std::string text = report.dump();
    if (opts.out.empty() || opts.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out);
    if (!out) throw hk::validation_error("cannot open output file: " + opts.out);
    out << text;
}

hk::Json characteristic_json(const hk::Characteristic& ch) {
    hk::Json j = hk::Json::object();
    hk::Json top = hk::Json::array(), bottom = hk::Json::array();
    for (int i = 0; i < ch.g(); ++i) {
        top.push(hk::Json::integer(ch.eps2[i]));
        bottom.push(hk::Json::integer(ch.eps_prime2[i]));
    }
    j.set("eps2", std::move(top));
    j.set("eps_prime2", std::move(bottom));
    j.set("parity", hk::Json::text(ch.is_even() ? "even" : "odd"));
    return j;
}

int run_periods(const std::string& file, const CommonOptions& opts, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    const CurveDocument doc = load_curve_document(file);
    const hk::PeriodSet periods = hk::compute_periods(doc.curve, opts.tol, opts.threads);

    hk::Json report = report_header("periods", echo, opts, doc.label);
    report.set("curve", curve_block(doc.curve));
    hk::Json results = hk::Json::object();
    results.set("two_omega", hk::Json::complex_matrix(periods.two_omega));
    results.set("two_omega_prime", hk::Json::complex_matrix(periods.two_omega_prime));
    results.set("two_eta", hk::Json::complex_matrix(periods.two_eta));
    results.set("two_eta_prime", hk::Json::complex_matrix(periods.two_eta_prime));
    results.set("tau", hk::Json::complex_matrix(periods.tau));
    results.set("inv_two_omega", hk::Json::complex_matrix(periods.inv_two_omega));
    report.set("results", std::move(results));
    hk::Json residuals = hk::Json::object();
    residuals.set("legendre", hk::Json::real(periods.legendre));
    residuals.set("tau_symmetry", hk::Json::real(hk::symmetry_defect(periods.tau)));
    report.set("residuals", std::move(residuals));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.set("timing_ms", hk::Json::real(ms));
    emit(report, opts);
    return 0;
}

std::vector<int> parse_partition_arg(const std::string& text) {
    std::vector<int> idx;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            idx.push_back(std::stoi(item));
        } catch (...) {
            throw hk::validation_error("--partition must be a comma-separated index list");
        }
    }
    return idx;
}

int run_kappa(const std::string& file, const std::string& route, const std::string& partition_arg,
              const CommonOptions& opts, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    if (route != "direct" && route != "modular" && route != "single" && route != "all")
        throw hk::validation_error("unknown --route: " + route);
    const CurveDocument doc = load_curve_document(file);
    const hk::Curve& curve = doc.curve;
    const int g = curve.genus();
    const hk::PeriodSet periods = hk::compute_periods(curve, opts.tol, opts.threads);

    hk::Json report = report_header("kappa", echo, opts, doc.label);
    report.set("curve", curve_block(curve));
    hk::Json results = hk::Json::object();
    hk::Json residuals = hk::Json::object();
    residuals.set("legendre", hk::Json::real(periods.legendre));

    const hk::KappaResult direct = hk::kappa_direct(periods);
    if (route == "direct" || route == "all")
        results.set("kappa_direct", hk::Json::complex_matrix(direct.kappa));

    double agreement = 0.0;
    std::optional<hk::LambdaMatrix> lambda;
    if (route == "modular" || route == "all") {
        lambda.emplace();
        lambda->coefficients = hk::lambda_table_exact(g, opts.seed, opts.threads);
        lambda->matrix = hk::lambda_from_coefficients(lambda->coefficients, curve);
        const hk::KappaResult modular =
            hk::kappa_modular(curve, periods, *lambda, opts.tol, opts.threads);
        results.set("kappa_modular", hk::Json::complex_matrix(modular.kappa));
        residuals.set("modular_vs_direct", hk::Json::real(modular.residual_vs_direct));
        agreement = std::max(agreement, modular.residual_vs_direct);
    }

    if (route == "single" || route == "all") {
        const auto dict = hk::abel_dictionary(curve, periods, -1, opts.tol);
        double max_even = 0.0;
        for (const auto& ch : hk::all_even_characteristics(g))
            max_even = std::max(max_even,
                                std::abs(hk::theta(ch, hk::CVector(), periods.tau, 1e-10).value));
        std::vector<hk::Partition> partitions;
        if (route == "single") {
            if (partition_arg.empty())
                throw hk::validation_error("--route single requires --partition i,j,...");
            partitions.push_back(hk::make_partition(g, parse_partition_arg(partition_arg)));
        } else {
            partitions = hk::enumerate_partitions(g);
        }
        hk::Json list = hk::Json::array();
        for (const auto& part : partitions) {
            const hk::KappaResult single = hk::kappa_single_characteristic(
                curve, periods, dict, 1e-6 * max_even, part, opts.tol);
            hk::Json entry = hk::Json::object();
            hk::Json idx = hk::Json::array();
            for (int v : part.i0) idx.push(hk::Json::integer(v));
            entry.set("i0", std::move(idx));
            entry.set("characteristic",
                      characteristic_json(hk::partition_characteristic(periods, dict, part,
                                                                       1e-6 * max_even)));
            entry.set("kappa", hk::Json::complex_matrix(single.kappa));
            entry.set("vs_direct", hk::Json::real(single.residual_vs_direct));
            list.push(std::move(entry));
            agreement = std::max(agreement, single.residual_vs_direct);
        }
        results.set("kappa_single", std::move(list));
    }

    if (route == "all") residuals.set("route_agreement", hk::Json::real(agreement));
    report.set("results", std::move(results));
    report.set("residuals", std::move(residuals));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.set("timing_ms", hk::Json::real(ms));
    emit(report, opts);
    return 0;
}

int run_lambda(int genus, bool exact, const CommonOptions& opts, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    if (genus < 1 || genus > 8) throw hk::validation_error("--genus must lie in 1..8");

    const hk::RationalCurve rational = hk::sample_rational_curve(genus, opts.seed);
    hk::IMatrix table;
    double extraction = 0.0;
    if (exact) {
        table = hk::lambda_table_exact(genus, opts.seed, opts.threads);
    } else {
        std::vector<Complex> roots;
        for (const auto& r : rational.roots) roots.emplace_back(r.get_d(), 0.0);
        const hk::LambdaMatrix lm = hk::lambda_matrix(hk::Curve::from_roots(roots), opts.threads);
        table = lm.coefficients;
        extraction = lm.extraction_residual;
    }

    // Closed-form cross-checks: anti-diagonal sums, first row, row sum.
    bool antidiag_ok = true, first_row_ok = true;
    for (int k = 2; k <= 2 * genus; ++k) {
        long long sum = 0;
        for (int i = 0; i < genus; ++i) {
            const int j = k - 2 - i;
            if (j >= 0 && j < genus) sum += table(i, j);
        }
        if (sum != hk::antidiagonal_sum_coefficient(genus, k)) antidiag_ok = false;
    }
    long long row_sum = 0;
    for (int k = 1; k <= genus; ++k) {
        if (table(0, k - 1) != hk::first_row_coefficient(genus, k)) first_row_ok = false;
        row_sum += table(0, k - 1);
    }
    const bool row_sum_ok = row_sum == hk::first_row_sum(genus);

    hk::Json report = report_header("lambda", echo, opts, "");
    hk::Json params = hk::Json::object();
    params.set("genus", hk::Json::integer(genus));
    params.set("exact", hk::Json::boolean(exact));
    hk::Json roots = hk::Json::array();
    for (const auto& r : rational.roots) roots.push(hk::Json::integer(r.get_num().get_si()));
    params.set("branch_points_used", std::move(roots));
    report.set("parameters", std::move(params));

    hk::Json results = hk::Json::object();
    results.set("coefficients", hk::Json::int_matrix(table));
    results.set("antidiagonal_rule_ok", hk::Json::boolean(antidiag_ok));
    results.set("first_row_rule_ok", hk::Json::boolean(first_row_ok));
    results.set("row_sum_rule_ok", hk::Json::boolean(row_sum_ok));
    if (genus == 6) {
        results.set("notes",
                    hk::Json::text("entry (1,1) computed as 792; it satisfies the anti-diagonal "
                                   "sum rule Sigma_{6;2} = 792, the first-row binomial C(12,5) = "
                                   "792 and the row sum C(13,5) = 1287. A previously tabulated "
                                   "value of 729 fails all three identities."));
    }
    report.set("results", std::move(results));
    hk::Json residuals = hk::Json::object();
    residuals.set("extraction", hk::Json::real(extraction));
    report.set("residuals", std::move(residuals));

    if (!(antidiag_ok && first_row_ok && row_sum_ok))
        throw hk::numeric_error("lambda: closed-form cross-checks failed");

    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.set("timing_ms", hk::Json::real(ms));
    emit(report, opts);
    return 0;
}

struct Check {
    std::string name;
    bool pass;
    double residual;
};

// Runs one named check in isolation: a numeric failure inside the check
// marks it failed instead of aborting the whole verification run.
template <typename Fn>
void guarded_check(std::vector<Check>& checks, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception&) {
        checks.push_back({name, false, std::numeric_limits<double>::quiet_NaN()});
    }
}

int run_verify(const std::string& file, const std::string& level, double perturb_eta,
               const CommonOptions& opts, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    if (level != "fast" && level != "full")
        throw hk::validation_error("--level must be fast or full");
    const CurveDocument doc = load_curve_document(file);
    const hk::Curve& curve = doc.curve;
    const int g = curve.genus();
    std::vector<Check> checks;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Curve-level identities.
    {
        double worst = 0.0;
        for (int s = 0; s < 32; ++s) {
            const Complex x(2.5 * unit(rng), 2.5 * unit(rng));
            worst = std::max(worst,
                             std::abs(hk::polar(curve, x, x) - 2.0 * curve.f(x)) /
                                 std::max(1.0, std::abs(curve.f(x))));
        }
        checks.push_back({"polar_diagonal", worst < 1e-11, worst});
    }
    {
        double worst = 0.0;
        for (int s = 0; s < 32; ++s) {
            const Complex x(1.5 * unit(rng), 1.5 * unit(rng));
            Complex lhs = 0.0;
            for (int j = 1; j <= g; ++j)
                lhs += hk::baker_numerator(curve, j, x) * std::pow(x, j - 1);
            Complex rhs = 0.0;
            for (int k = 2; k <= 2 * g + 2; ++k)
                rhs += (0.25 * double(k - 1) * double(k - 1) +
                        0.125 * (((k - 1) % 2 == 0 ? 1.0 : -1.0) - 1.0)) *
                       curve.coefficients()[k] * std::pow(x, k - 2);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        checks.push_back({"baker_closed_form", worst < 1e-11, worst});
    }
    {
        double worst = 0.0;
        if (curve.monic()) {
            for (int j = 0; j <= 2 * g + 2; ++j) {
                const Complex vieta = (j % 2 == 0 ? 1.0 : -1.0) *
                                      hk::elementary_symmetric(curve.branch_points(), j);
                worst = std::max(worst, std::abs(curve.coefficients()[2 * g + 2 - j] - vieta) /
                                            std::max(1.0, std::abs(vieta)));
            }
        }
        checks.push_back({"vieta_symmetric_functions", worst < 1e-10, worst});
    }

    // Periods and theta.
    hk::PeriodSet periods = hk::compute_periods(curve, opts.tol, opts.threads);
    if (perturb_eta != 0.0) periods.two_eta(0, 0) += perturb_eta;
    {
        const double res = hk::legendre_residual(periods);
        checks.push_back({"legendre", res < 100.0 * opts.tol, res});
    }
    {
        const double defect = hk::symmetry_defect(periods.tau);
        checks.push_back({"tau_symmetry", defect < 1e-9, defect});
        Eigen::SelfAdjointEigenSolver<hk::RMatrix> eig(
            0.5 * (periods.tau.imag() + periods.tau.imag().transpose()));
        const double min_eig = eig.eigenvalues().minCoeff();
        checks.push_back({"tau_imag_positive_definite", min_eig > 0.0, min_eig});
    }
    guarded_check(checks, "nonsingular_even_census", [&] {
        const long long n_g = hk::binomial(2 * g + 1, g);
        const double count =
            double(hk::enumerate_nonsingular_even(periods.tau, opts.tol, int(n_g)).size());
        checks.push_back({"nonsingular_even_census", true, count});
    });
    guarded_check(checks, "abel_half_lattice_rounding", [&] {
        const auto dict = hk::abel_dictionary(curve, periods, -1, opts.tol);
        double worst = 0.0;
        for (int j = 1; j <= 2 * g + 2; ++j) worst = std::max(worst, dict.residuals[j]);
        checks.push_back({"abel_half_lattice_rounding", worst < 1e-6, worst});
    });

    // Route agreement (needs the integer tables; g <= 8 guard is upstream).
    hk::LambdaMatrix lambda;
    lambda.coefficients = hk::lambda_table_exact(g, opts.seed, opts.threads);
    lambda.matrix = hk::lambda_from_coefficients(lambda.coefficients, curve);
    guarded_check(checks, "kappa_modular_vs_direct", [&] {
        const auto modular = hk::kappa_modular(curve, periods, lambda, opts.tol, opts.threads);
        checks.push_back({"kappa_modular_vs_direct", modular.residual_vs_direct < 1e-7,
                          modular.residual_vs_direct});
    });
    guarded_check(checks, "lemma_identity", [&] {
        const double res = hk::verify_lemma_identity(curve, lambda, 10, opts.seed);
        checks.push_back({"lemma_identity", res < 1e-8, res});
    });

    if (level == "full") {
        guarded_check(checks, "kappa_single_all_partitions", [&] {
            const auto dict = hk::abel_dictionary(curve, periods, -1, opts.tol);
            double max_even = 0.0;
            for (const auto& ch : hk::all_even_characteristics(g))
                max_even = std::max(
                    max_even, std::abs(hk::theta(ch, hk::CVector(), periods.tau, 1e-10).value));
            double worst = 0.0;
            for (const auto& part : hk::enumerate_partitions(g)) {
                const auto single = hk::kappa_single_characteristic(curve, periods, dict,
                                                                    1e-6 * max_even, part, opts.tol);
                worst = std::max(worst, single.residual_vs_direct);
            }
            checks.push_back({"kappa_single_all_partitions", worst < 1e-7, worst});
        });
        guarded_check(checks, "klein_pure_theta_sum", [&] {
            const auto [shifted, klein] =
                hk::klein_shift(curve, periods, lambda, opts.tol, opts.threads);
            checks.push_back({"klein_pure_theta_sum", klein.residual_vs_direct < 1e-7,
                              klein.residual_vs_direct});
            const double drift = std::abs(shifted.legendre - periods.legendre);
            checks.push_back({"klein_legendre_preserved", drift < 1e-10, drift});
        });
        guarded_check(checks, "theta_quasi_periodicity", [&] {
            // Quasi-periodicity of theta under integer shifts.
            double worst = 0.0;
            const auto evens = hk::all_even_characteristics(g);
            const auto& ch = evens[evens.size() / 2];
            hk::CVector z(g);
            for (int i = 0; i < g; ++i) z[i] = Complex(0.3 * unit(rng), 0.2 * unit(rng));
            const Complex base = hk::theta(ch, z, periods.tau, opts.tol).value;
            for (int k = 0; k < g; ++k) {
                hk::CVector shifted_z = z;
                shifted_z[k] += 1.0;
                const Complex moved = hk::theta(ch, shifted_z, periods.tau, opts.tol).value;
                const Complex factor =
                    std::exp(Complex(0.0, 2.0 * M_PI) * (0.5 * ch.eps2[k]));
                worst = std::max(worst, std::abs(moved - factor * base) /
                                            std::max(1.0, std::abs(base)));
            }
            checks.push_back({"theta_quasi_periodicity", worst < 1e-9, worst});
        });
    }

    bool all_pass = true;
    hk::Json list = hk::Json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        hk::Json entry = hk::Json::object();
        entry.set("name", hk::Json::text(c.name));
        entry.set("pass", hk::Json::boolean(c.pass));
        entry.set("residual", hk::Json::real(c.residual));
        list.push(std::move(entry));
    }

    hk::Json report = report_header("verify", echo, opts, doc.label);
    report.set("curve", curve_block(curve));
    hk::Json results = hk::Json::object();
    results.set("level", hk::Json::text(level));
    results.set("checks", std::move(list));
    results.set("all_pass", hk::Json::boolean(all_pass));
    report.set("results", std::move(results));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.set("timing_ms", hk::Json::real(ms));
    emit(report, opts);

    if (!all_pass) {
        std::string failed;
        for (const auto& c : checks)
            if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
        throw hk::numeric_error("verify: failed invariants: " + failed);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::string echo;
    for (int i = 0; i < argc; ++i) {
        if (i) echo += ' ';
        echo += argv[i];
    }

    CLI::App app{"Period matrices, theta constants and the kappa matrix of hyperelliptic curves"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOptions opts;
    std::string curve_file, route = "all", partition_arg, level = "fast";
    int genus = 0;
    bool exact = false;
    double perturb_eta = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opts.tol, "numerical tolerance");
        cmd->add_option("--out", opts.out, "output path (default stdout)");
        cmd->add_option("--seed", opts.seed, "random seed");
        cmd->add_option("--threads", opts.threads, "worker thread hint (0 = auto)");
    };

    CLI::App* periods = app.add_subcommand("periods", "period matrices of a curve");
    periods->add_option("curve_file", curve_file)->required();
    add_common(periods);

    CLI::App* kappa = app.add_subcommand("kappa", "kappa = eta (2 omega)^{-1} by several routes");
    kappa->add_option("curve_file", curve_file)->required();
    kappa->add_option("--route", route, "direct|modular|single|all");
    kappa->add_option("--partition", partition_arg, "I0 indices for --route single, e.g. 1,2,3");
    add_common(kappa);

    CLI::App* lambda = app.add_subcommand("lambda", "integer coefficient tables of Lambda_g");
    lambda->add_option("--genus", genus)->required();
    lambda->add_flag("--exact", exact, "exact rational arithmetic");
    add_common(lambda);

    CLI::App* verify = app.add_subcommand("verify", "run the invariant checks on a curve");
    verify->add_option("curve_file", curve_file)->required();
    verify->add_option("--level", level, "fast|full");
    verify->add_option("--perturb-eta", perturb_eta,
                       "diagnostic: perturb one eta entry before checking");
    add_common(verify);

    try {
        app.parse(argc, argv);
        if (periods->parsed()) return run_periods(curve_file, opts, echo);
        if (kappa->parsed()) return run_kappa(curve_file, route, partition_arg, opts, echo);
        if (lambda->parsed()) return run_lambda(genus, exact, opts, echo);
        if (verify->parsed()) return run_verify(curve_file, level, perturb_eta, opts, echo);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hk::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hk::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
