#pragma once

#include "modheat/config.hpp"
#include "modheat/verify.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace modheat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceViolation = 1;
inline constexpr int kExitArgumentError = 2;

inline std::string fmt_double(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// Parses "a..b" (inclusive), a comma list, or a single integer.
inline std::vector<std::int64_t> parse_int_range(const std::string& text) {
    std::vector<std::int64_t> out;
    const auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            const std::int64_t lo = std::stoll(text.substr(0, dots));
            const std::int64_t hi = std::stoll(text.substr(dots + 2));
            if (lo > hi) throw std::invalid_argument("empty range");
            for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
            return out;
        }
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = std::min(text.find(',', pos), text.size());
            out.push_back(std::stoll(text.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer range: " + text);
    }
}

inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    try {
        while (pos <= text.size()) {
            const auto comma = std::min(text.find(',', pos), text.size());
            out.push_back(std::stod(text.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number list: " + text);
    }
}

// ---------------------------------------------------------------------------
// heat: closed form vs transfer vs truncated series, one row per (t, n)
// ---------------------------------------------------------------------------

struct HeatArgs {
    std::vector<double> ts{1.0};
    std::vector<std::int64_t> ns;
};

inline int cmd_heat(const HeatArgs& args, const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (args.ts.empty() || args.ns.empty()) throw std::invalid_argument("heat: empty t or n list");
    for (double t : args.ts) {
        if (t < 0) throw std::invalid_argument("heat: t must be >= 0");
    }
    for (std::int64_t n : args.ns) {
        if (std::abs(n) > cfg.oracle_window - 10) {
            throw std::invalid_argument("heat: |n| too large for the configured oracle window");
        }
    }

    nlohmann::json rows = nlohmann::json::array();
    if (cfg.output_format == "csv") out << "t,n,K_formula,K_transfer,K_oracle,abs_err\n";
    bool ok = true;
    for (double t : args.ts) {
        const auto profile = line_series_profile(cfg.oracle_window, cfg.oracle_terms, t);
        for (std::int64_t n : args.ns) {
            const double formula = kernel_gamma(t, n, cfg.quad_tol).value;
            const double transfer = kernel_transfer(t, n, cfg.quad_tol).value;
            const double oracle = profile.at(n) / std::sqrt(static_cast<double>(fiber_size(n)));
            const double abs_err =
                std::max(std::abs(formula - oracle), std::abs(transfer - oracle));
            ok = ok && abs_err <= 1e-6;
            if (cfg.output_format == "csv") {
                out << fmt_double(t) << ',' << n << ',' << fmt_double(formula) << ','
                    << fmt_double(transfer) << ',' << fmt_double(oracle) << ','
                    << fmt_double(abs_err, "%.3e") << '\n';
            } else {
                rows.push_back({{"t", t},
                                {"n", n},
                                {"K_formula", formula},
                                {"K_transfer", transfer},
                                {"K_oracle", oracle},
                                {"abs_err", abs_err}});
            }
        }
    }
    if (cfg.output_format == "json") out << rows.dump(2) << '\n';
    return ok ? kExitOk : kExitToleranceViolation;
}

// ---------------------------------------------------------------------------
// spectrum: the four components of Sp(L)
// ---------------------------------------------------------------------------

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const SpectrumSet sp = spectrum();
    const bool disjoint = sp.band0_hi < sp.point0 && sp.point0 < sp.band1_lo &&
                          sp.band1_hi < sp.point1 && sp.band1_lo > sp.band0_hi;
    if (cfg.output_format == "json") {
        nlohmann::json j = {
            {"lambda0", sp.lambda_0},
            {"lambda1", sp.lambda_1},
            {"band0", {sp.band0_lo, sp.band0_hi}},
            {"point0", sp.point0},
            {"band1", {sp.band1_lo, sp.band1_hi}},
            {"point1", sp.point1},
            {"disjoint", disjoint},
        };
        out << j.dump(2) << '\n';
    } else {
        const char* f = "%.12f";
        out << "Sp(L) = [" << fmt_double(sp.band0_lo, f) << ", " << fmt_double(sp.band0_hi, f)
            << "] u {" << fmt_double(sp.point0, f) << "} u [" << fmt_double(sp.band1_lo, f)
            << ", " << fmt_double(sp.band1_hi, f) << "] u {" << fmt_double(sp.point1, f) << "}\n";
        out << "lambda0 = " << fmt_double(sp.lambda_0, f) << '\n';
        out << "lambda1 = " << fmt_double(sp.lambda_1, f) << '\n';
        out << "components_disjoint = " << (disjoint ? "true" : "false") << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// finite: per-prime eigenvalue CSVs plus the conjecture table
// ---------------------------------------------------------------------------

struct FiniteArgs {
    std::vector<std::int64_t> primes;
    std::string out_dir = ".";
};

inline int cmd_finite(const FiniteArgs& args, const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (args.primes.empty()) throw std::invalid_argument("finite: empty prime list");
    std::vector<std::uint32_t> primes;
    for (std::int64_t p : args.primes) {
        if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
            throw std::invalid_argument("finite: " + std::to_string(p) + " is not prime");
        }
        primes.push_back(static_cast<std::uint32_t>(p));
    }

    std::filesystem::create_directories(args.out_dir);
    const double l0 = lambda0();
    bool ok = true;

    nlohmann::json jrows = nlohmann::json::array();
    if (cfg.output_format == "csv") {
        out << "p,order,gap,gap_minus_lambda0,contains_3_4,contains_7_4,residual\n";
    }
    for (std::uint32_t p : primes) {
        const FiniteSpectrum spec = spectrum_of(p, cfg.zero_threshold);
        const std::string path =
            args.out_dir + "/psl2_f" + std::to_string(p) + "_eigenvalues.csv";
        std::ofstream csv(path);
        if (!csv) throw std::runtime_error("finite: cannot write " + path);
        csv << "p,index,eigenvalue\n";
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
            csv << p << ',' << i << ',' << fmt_double(spec.eigenvalues[i]) << '\n';
        }

        const bool has34 = spectrum_contains(spec.eigenvalues, 0.75, 1e-6);
        const bool has74 = spectrum_contains(spec.eigenvalues, 1.75, 1e-6);
        ok = ok && spec.gap >= l0;
        if (cfg.output_format == "csv") {
            out << p << ',' << spec.eigenvalues.size() << ',' << fmt_double(spec.gap) << ','
                << fmt_double(spec.gap - l0) << ',' << (has34 ? "true" : "false") << ','
                << (has74 ? "true" : "false") << ',' << fmt_double(spec.residual, "%.3e") << '\n';
        } else {
            jrows.push_back({{"p", p},
                             {"order", spec.eigenvalues.size()},
                             {"gap", spec.gap},
                             {"gap_minus_lambda0", spec.gap - l0},
                             {"contains_3_4", has34},
                             {"contains_7_4", has74},
                             {"residual", spec.residual}});
        }
    }
    if (cfg.output_format == "json") out << jrows.dump(2) << '\n';
    return ok ? kExitOk : kExitToleranceViolation;
}

// ---------------------------------------------------------------------------
// verify: the full invariant battery as a machine-readable report
// ---------------------------------------------------------------------------

inline nlohmann::json verify_report_json(const VerifyReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json entry = {{"suite", c.suite},
                                {"name", c.name},
                                {"pass", c.pass},
                                {"measured_error", c.error},
                                {"tolerance", c.tolerance}};
        if (!c.details.empty()) entry["details"] = c.details;
        checks.push_back(entry);
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.adjudication.rows) {
        rows.push_back({{"t", r.t},
                        {"n", r.n},
                        {"oracle", r.oracle},
                        {"fiber_spread", r.fiber_spread},
                        {"printed_value", r.printed_value},
                        {"fiber_value", r.fiber_value},
                        {"printed_err", r.printed_err},
                        {"fiber_err", r.fiber_err}});
    }
    return {{"checks", checks},
            {"negative_prefactor_adjudication",
             {{"rows", rows},
              {"printed_max_err", report.adjudication.printed_max_err},
              {"fiber_max_err", report.adjudication.fiber_max_err},
              {"tolerance", report.adjudication.tolerance},
              {"verdict", report.adjudication.verdict()}}},
            {"pass", report.pass}};
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const VerifyReport report = run_verification(cfg);
    out << verify_report_json(report).dump(2) << '\n';
    return report.pass ? kExitOk : kExitToleranceViolation;
}

}  // namespace modheat
