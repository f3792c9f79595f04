#pragma once

#include "credit_curves/cashflows.hpp"
#include "credit_curves/curves.hpp"
#include "credit_curves/fitting.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace credit_curves::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kInfeasibleFit = 2 };

/// Everything a subcommand reads from the command line and config file.
struct RunConfig {
    std::filesystem::path bonds;
    std::filesystem::path curve;
    std::filesystem::path fit;
    std::filesystem::path config_file;
    std::filesystem::path out = ".";
    std::optional<double> recovery;
    std::optional<double> cds_recovery;
    FitConfig fit_config;
    std::vector<double> measure_grid;
    std::vector<std::string> kinds;
    std::vector<double> coupons;
    int frequency = 2;
};

/// Bond template for synthetic universes.
struct BondTemplate {
    double coupon = 0.05;
    int frequency = 2;
    double maturity = 5.0;
};

/// 30 templates with coupons spread over 3%..9% and maturities over 1..30y,
/// every other one with a short first period.
std::vector<BondTemplate> default_templates();

struct UniverseSpec {
    double alpha = 0.05;
    std::array<double, 3> betas{0.5, 0.3, 0.2};
    double recovery = 0.40;
    std::vector<BondTemplate> templates = default_templates();
    /// Standard deviation of the Gaussian price noise, in points per 100.
    double noise = 0.0;
    std::uint64_t seed = 42;
};

/// Prices each template under the survival curve and adds seeded noise.
std::vector<BondQuote> gen_universe(const UniverseSpec& spec, const DiscountCurve& disc);

/// Writes curve.json and residuals.csv to config.out.
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Writes one CSV per requested measure kind (one per coupon for CCP).
int cmd_measures(const RunConfig& config, std::ostream& out, std::ostream& err);

struct InversionReport {
    double zspread_5y = 0.0;
    double zspread_20y = 0.0;
    double hazard_5y = 0.0;
    double hazard_20y = 0.0;
    bool zspread_above_2000bp = false;
    bool zspread_ratio_above_4 = false;
    bool hazards_within_15pct = false;
};

/// Two 5% semiannual bonds (5y, 20y) both at 40 on a flat 4% curve:
/// Z-spreads versus flat FRP-implied hazards at 40% recovery.
InversionReport demo_inversion();
int cmd_demo_inversion(std::ostream& out);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace credit_curves::cli
