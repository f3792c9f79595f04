#include "credit_curves/cli.hpp"

#include "credit_curves/errors.hpp"
#include "credit_curves/io.hpp"
#include "credit_curves/measures.hpp"
#include "credit_curves/pricing.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace credit_curves::cli {

namespace {

constexpr double kBp = 1e4;

std::string bp(double decimal) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << decimal * kBp;
    return s.str();
}

std::string fixed(double value, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << value;
    return s.str();
}

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidInput("cannot write '" + path.string() + "'");
    }
    f << text;
}

void require(const std::filesystem::path& path, const char* flag) {
    if (path.empty()) {
        throw InvalidInput(std::string("missing required option ") + flag);
    }
    if (!std::filesystem::exists(path)) {
        throw InvalidInput(std::string(flag) + ": file '" + path.string() + "' does not exist");
    }
}

FitConfig effective_fit_config(const RunConfig& config) {
    FitConfig fc = config.fit_config;
    if (!config.config_file.empty()) {
        require(config.config_file, "--config");
        io::apply_config_file(config.config_file, fc);
    }
    if (config.recovery) {
        fc.recovery = RecoveryAssumption(*config.recovery);
    }
    return fc;
}

/// The stored fit plus the recovery to price with (--recovery overrides).
struct LoadedFit {
    io::CurveRecord record;
    RecoveryAssumption recovery;
};

LoadedFit load_fit(const RunConfig& config) {
    require(config.fit, "--fit");
    auto record = io::read_curve_json(config.fit);
    const RecoveryAssumption rec(config.recovery.value_or(record.recovery));
    return {std::move(record), rec};
}

std::vector<io::ResidualRow> residual_rows(const std::vector<BondQuote>& universe, const DiscountCurve& disc,
                                           const FitResult& fit) {
    std::vector<io::ResidualRow> rows;
    for (std::size_t q = 0; q < universe.size(); ++q) {
        const auto& bond = universe[q];
        io::ResidualRow row{bond.id, bond.clean_price, fit.fitted_prices[q], fit.residuals[q], {}, {}, {}};
        try {
            row.zspread = solve_zspread(bond, disc);
        } catch (const UnattainablePrice&) {
        }
        try {
            const auto ps = market_p_spread(bond, disc, fit.curve, fit.recovery);
            row.oasf = ps.oasf;
            row.market_p_spread = ps.market;
        } catch (const UnattainablePrice&) {
        } catch (const DomainError&) {
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string opt_bp(const std::optional<double>& v) { return v ? bp(*v) : std::string("n/a"); }

} // namespace

std::vector<BondTemplate> default_templates() {
    std::vector<BondTemplate> templates;
    for (int i = 0; i < 30; ++i) {
        BondTemplate t;
        t.coupon = 0.03 + 0.06 * static_cast<double>((7 * i) % 30) / 29.0;
        t.frequency = 2;
        t.maturity = (i + 1) - (i % 2 == 1 ? 0.3 : 0.0);
        templates.push_back(t);
    }
    return templates;
}

std::vector<BondQuote> gen_universe(const UniverseSpec& spec, const DiscountCurve& disc) {
    const SurvivalCurve surv(spec.alpha, spec.betas);
    const RecoveryAssumption rec(spec.recovery);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<BondQuote> bonds;
    int n = 0;
    for (const auto& t : spec.templates) {
        char id[32];
        std::snprintf(id, sizeof(id), "SYN%02d", ++n);
        BondQuote bond{id, t.coupon, t.frequency, t.maturity, 100.0};
        const Schedule sched = build_schedule(bond);
        bond.clean_price = 100.0 * (pv_survival(sched, disc, surv, rec) - sched.accrued_amount);
        if (spec.noise > 0.0) {
            bond.clean_price += spec.noise * noise(rng);
        }
        bonds.push_back(std::move(bond));
    }
    return bonds;
}

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
    require(config.bonds, "--bonds");
    require(config.curve, "--curve");
    const FitConfig fc = effective_fit_config(config);
    const auto universe = io::read_bonds_csv(config.bonds);
    const auto disc = io::read_discount_csv(config.curve);
    const FitResult fit = fit_survival(universe, disc, fc);
    const auto rows = residual_rows(universe, disc, fit);

    std::ostringstream residuals;
    io::write_residuals_csv(residuals, rows);
    write_file(config.out / "curve.json", io::curve_json(fit));
    write_file(config.out / "residuals.csv", residuals.str());

    const auto& b = fit.curve.betas();
    out << "alpha " << fit.curve.alpha() << "  betas [" << b[0] << ", " << b[1] << ", " << b[2] << "]\n";
    out << "wape " << fit.wape << " (price points)  iterations " << fit.iterations << "  active constraints "
        << fit.active_constraints.size() << "\n\n";
    out << std::left << std::setw(16) << "id" << std::right << std::setw(10) << "Z-Spread" << std::setw(10)
        << "P-Spread" << std::setw(8) << "OASF" << std::setw(9) << "Price" << std::setw(9) << "Fitted"
        << std::setw(10) << "Residual" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(16) << r.id << std::right << std::setw(10) << opt_bp(r.zspread)
            << std::setw(10) << opt_bp(r.market_p_spread) << std::setw(8) << opt_bp(r.oasf) << std::setw(9)
            << fixed(r.market, 2) << std::setw(9) << fixed(r.fitted, 2) << std::setw(10) << fixed(r.residual, 2)
            << '\n';
    }
    return kSuccess;
}

int cmd_measures(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
    const auto [record, rec] = load_fit(config);
    require(config.curve, "--curve");
    const auto disc = io::read_discount_csv(config.curve);

    std::vector<std::string> kinds = config.kinds;
    if (kinds.empty()) {
        kinds = {"hazard", "zz_spread", "par_coupon", "par_yield", "p_spread", "bcds", "ccp"};
    }
    std::vector<double> coupons = config.coupons;
    if (coupons.empty()) {
        coupons = {0.06, 0.08, 0.10};
    }
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& name : kinds) {
        const auto kind = parse_measure_kind(name);
        if (!kind) {
            throw InvalidInput("unknown measure kind '" + name + "'");
        }
        MeasureRequest request;
        request.kind = *kind;
        request.frequency = config.frequency;
        request.cds_recovery = config.cds_recovery;
        if (!config.measure_grid.empty()) {
            request.grid = config.measure_grid;
        }
        const auto emit = [&](const std::string& file, const MeasureRequest& req) {
            std::ostringstream csv;
            io::write_measure_csv(csv, sample_measure(req, disc, record.curve, rec));
            files.emplace_back(file, csv.str());
        };
        if (*kind == MeasureKind::Ccp) {
            for (double c : coupons) {
                request.coupon = c;
                emit("ccp_" + io::format_double(c * 100.0) + ".csv", request);
            }
        } else {
            emit(name + ".csv", request);
        }
    }
    for (const auto& [file, text] : files) {
        write_file(config.out / file, text);
        out << (config.out / file).string() << '\n';
    }
    return kSuccess;
}

InversionReport demo_inversion() {
    const auto disc = DiscountCurve::flat(0.04);
    const RecoveryAssumption rec(0.40);
    const BondQuote short_bond{"5Y 5%", 0.05, 2, 5.0, 40.0};
    const BondQuote long_bond{"20Y 5%", 0.05, 2, 20.0, 40.0};

    const auto implied_hazard = [&](const BondQuote& bond) {
        const Schedule sched = build_schedule(bond);
        const double target = dirty_price(bond);
        RootOptions opts;
        opts.initial = {0.0, 3.0};
        opts.max_bracket = {0.0, 50.0};
        return find_monotone_root(
                   [&](double h) { return pv_survival(sched, disc, SurvivalCurve::flat_hazard(h), rec) - target; },
                   opts)
            .root;
    };

    InversionReport r;
    r.zspread_5y = solve_zspread(short_bond, disc);
    r.zspread_20y = solve_zspread(long_bond, disc);
    r.hazard_5y = implied_hazard(short_bond);
    r.hazard_20y = implied_hazard(long_bond);
    r.zspread_above_2000bp = r.zspread_5y > 0.20;
    r.zspread_ratio_above_4 = r.zspread_5y > 4.0 * r.zspread_20y;
    r.hazards_within_15pct = std::abs(r.hazard_5y - r.hazard_20y) <= 0.15 * std::max(r.hazard_5y, r.hazard_20y);
    return r;
}

int cmd_demo_inversion(std::ostream& out) {
    const auto r = demo_inversion();
    const auto mark = [](bool ok) { return ok ? "yes" : "NO"; };
    out << "Flat 4% base curve, two 5% semiannual bonds priced at 40.00, recovery 40%\n\n";
    out << std::left << std::setw(10) << "bond" << std::right << std::setw(16) << "Z-spread (bp)" << std::setw(22)
        << "FRP flat hazard (bp)" << '\n';
    out << std::left << std::setw(10) << "5y" << std::right << std::setw(16) << bp(r.zspread_5y) << std::setw(22)
        << bp(r.hazard_5y) << '\n';
    out << std::left << std::setw(10) << "20y" << std::right << std::setw(16) << bp(r.zspread_20y) << std::setw(22)
        << bp(r.hazard_20y) << "\n\n";
    out << "Z-spread ratio 5y/20y: " << fixed(r.zspread_5y / r.zspread_20y, 3) << '\n';
    out << "Z(5y) > 2000bp: " << mark(r.zspread_above_2000bp) << '\n';
    out << "Z(5y) > 4 x Z(20y): " << mark(r.zspread_ratio_above_4) << '\n';
    out << "FRP hazards agree within 15%: " << mark(r.hazards_within_15pct) << '\n';
    return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Survival-curve fitting and credit bond analytics"};
    app.require_subcommand(1);

    RunConfig config;
    std::string alpha_grid;
    bool no_reweight = false;
    std::string grid_text;
    std::string kinds_text;
    std::string coupons_text;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--recovery", config.recovery, "Principal recovery fraction in [0, 1)");
        sub->add_option("--out", config.out, "Output directory");
    };

    auto* fit = app.add_subcommand("fit", "Fit a survival curve to a bond universe");
    fit->add_option("--bonds", config.bonds, "Bonds CSV")->required();
    fit->add_option("--curve", config.curve, "Base zero curve CSV")->required();
    fit->add_option("--config", config.config_file, "key = value configuration file");
    fit->add_option("--alpha-grid", alpha_grid, "Comma-separated decay factors");
    fit->add_flag("--no-reweight", no_reweight, "Disable outlier reweighting");
    add_common(fit);

    auto* measures = app.add_subcommand("measures", "Sample term structures from a fitted curve");
    measures->add_option("--fit", config.fit, "curve.json from fit")->required();
    measures->add_option("--curve", config.curve, "Base zero curve CSV")->required();
    measures->add_option("--kinds", kinds_text, "hazard,zz_spread,par_coupon,par_yield,p_spread,bcds,ccp");
    measures->add_option("--coupons", coupons_text, "CCP coupon levels (decimals)");
    measures->add_option("--grid", grid_text, "Comma-separated tenors");
    measures->add_option("--frequency", config.frequency, "Coupon frequency for par measures and CCP");
    measures->add_option("--cds-recovery", config.cds_recovery, "BCDS recovery (default: bond recovery)");
    add_common(measures);

    auto* price = app.add_subcommand("price", "Fitted clean prices and residuals");
    price->add_option("--bonds", config.bonds, "Bonds CSV")->required();
    price->add_option("--curve", config.curve, "Base zero curve CSV")->required();
    price->add_option("--fit", config.fit, "curve.json from fit")->required();
    price->add_option("--recovery", config.recovery, "Principal recovery fraction in [0, 1)");

    auto* zspread = app.add_subcommand("zspread", "Conventional Z-spreads");
    zspread->add_option("--bonds", config.bonds, "Bonds CSV")->required();
    zspread->add_option("--curve", config.curve, "Base zero curve CSV")->required();

    auto* oasf = app.add_subcommand("oasf", "OAS-to-Fit and P-spreads against a fitted curve");
    oasf->add_option("--bonds", config.bonds, "Bonds CSV")->required();
    oasf->add_option("--curve", config.curve, "Base zero curve CSV")->required();
    oasf->add_option("--fit", config.fit, "curve.json from fit")->required();
    oasf->add_option("--recovery", config.recovery, "Principal recovery fraction in [0, 1)");

    auto* bcds_cmd = app.add_subcommand("bcds", "Bond-implied CDS spreads");
    bcds_cmd->add_option("--curve", config.curve, "Base zero curve CSV")->required();
    bcds_cmd->add_option("--fit", config.fit, "curve.json from fit")->required();
    bcds_cmd->add_option("--grid", grid_text, "Comma-separated tenors");
    bcds_cmd->add_option("--recovery", config.recovery, "CDS recovery fraction in [0, 1)");

    app.add_subcommand("demo-inversion", "Z-spread inversion versus flat FRP hazard");

    auto* gen = app.add_subcommand("gen-universe", "Synthetic bond universe from a survival curve");
    UniverseSpec spec;
    double flat_rate = 0.04;
    std::string betas_text;
    std::filesystem::path gen_out = "bonds.csv";
    gen->add_option("--curve", config.curve, "Base zero curve CSV (default: flat --flat-rate)");
    gen->add_option("--flat-rate", flat_rate, "Flat continuous zero rate when --curve is absent");
    gen->add_option("--alpha", spec.alpha, "Survival decay factor");
    gen->add_option("--betas", betas_text, "beta1,beta2,beta3 (summing to one)");
    gen->add_option("--recovery", spec.recovery, "Principal recovery fraction");
    gen->add_option("--noise", spec.noise, "Gaussian price noise, points per 100");
    gen->add_option("--seed", spec.seed, "Random seed");
    gen->add_option("--out", gen_out, "Output bonds CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (!alpha_grid.empty()) {
            config.fit_config.alpha_grid = io::parse_number_list(alpha_grid);
        }
        config.fit_config.reweight = !no_reweight;
        if (!grid_text.empty()) {
            config.measure_grid = io::parse_number_list(grid_text);
        }
        if (!coupons_text.empty()) {
            config.coupons = io::parse_number_list(coupons_text);
        }
        std::istringstream kinds(kinds_text);
        for (std::string k; std::getline(kinds, k, ',');) {
            if (!k.empty()) {
                config.kinds.push_back(k);
            }
        }

        if (fit->parsed()) {
            return cmd_fit(config, out, err);
        }
        if (measures->parsed()) {
            return cmd_measures(config, out, err);
        }
        if (price->parsed() || oasf->parsed()) {
            require(config.bonds, "--bonds");
            require(config.curve, "--curve");
            const auto [record, rec] = load_fit(config);
            const auto universe = io::read_bonds_csv(config.bonds);
            const auto disc = io::read_discount_csv(config.curve);
            if (price->parsed()) {
                out << "id,market,fitted,residual\n";
                for (const auto& bond : universe) {
                    const double fitted = fitted_clean_price(bond, disc, record.curve, rec);
                    out << bond.id << ',' << fixed(bond.clean_price, 4) << ',' << fixed(fitted, 4) << ','
                        << fixed(bond.clean_price - fitted, 4) << '\n';
                }
            } else {
                out << "id,oasf_bp,fair_p_spread_bp,market_p_spread_bp\n";
                for (const auto& bond : universe) {
                    const auto ps = market_p_spread(bond, disc, record.curve, rec);
                    out << bond.id << ',' << bp(ps.oasf) << ',' << bp(ps.fair) << ',' << bp(ps.market) << '\n';
                }
            }
            return kSuccess;
        }
        if (zspread->parsed()) {
            require(config.bonds, "--bonds");
            require(config.curve, "--curve");
            const auto universe = io::read_bonds_csv(config.bonds);
            const auto disc = io::read_discount_csv(config.curve);
            out << "id,zspread_bp\n";
            for (const auto& bond : universe) {
                out << bond.id << ',' << bp(solve_zspread(bond, disc)) << '\n';
            }
            return kSuccess;
        }
        if (bcds_cmd->parsed()) {
            require(config.fit, "--fit");
            require(config.curve, "--curve");
            const auto record = io::read_curve_json(config.fit);
            const auto disc = io::read_discount_csv(config.curve);
            const double recovery = config.recovery.value_or(record.recovery);
            const auto grid = config.measure_grid.empty() ? std::vector<double>{1, 2, 3, 5, 7, 10}
                                                          : config.measure_grid;
            out << "tenor_years,bcds_bp\n";
            for (double t : grid) {
                out << io::format_double(t) << ',' << bp(bcds(t, disc, record.curve, recovery)) << '\n';
            }
            return kSuccess;
        }
        if (app.got_subcommand("demo-inversion")) {
            return cmd_demo_inversion(out);
        }
        if (gen->parsed()) {
            if (!betas_text.empty()) {
                const auto b = io::parse_number_list(betas_text);
                if (b.size() != 3) {
                    throw InvalidInput("--betas needs exactly three values");
                }
                spec.betas = {b[0], b[1], b[2]};
            }
            const DiscountCurve disc =
                config.curve.empty() ? DiscountCurve::flat(flat_rate) : io::read_discount_csv(config.curve);
            std::ostringstream csv;
            io::write_bonds_csv(csv, gen_universe(spec, disc));
            write_file(gen_out, csv.str());
            out << gen_out.string() << '\n';
            return kSuccess;
        }
    } catch (const InfeasibleFit& e) {
        err << "infeasible fit: " << e.what() << '\n';
        return kInfeasibleFit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace credit_curves::cli
