#pragma once

#include "credit_curves/cashflows.hpp"
#include "credit_curves/curves.hpp"
#include "credit_curves/fitting.hpp"
#include "credit_curves/measures.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace credit_curves::io {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// `id,coupon_pct,frequency,maturity_years,clean_price`
std::vector<BondQuote> parse_bonds_csv(std::istream& in);
std::vector<BondQuote> read_bonds_csv(const std::filesystem::path& path);
void write_bonds_csv(std::ostream& out, const std::vector<BondQuote>& bonds);

/// `tenor_years,zero_rate`
DiscountCurve parse_discount_csv(std::istream& in);
DiscountCurve read_discount_csv(const std::filesystem::path& path);

/// Persisted survival curve: alpha, beta1..3, t_max, recovery, wape plus
/// optional fit diagnostics.
struct CurveRecord {
    SurvivalCurve curve;
    double recovery = 0.40;
    double wape = 0.0;
};

std::string curve_json(const FitResult& fit);
std::string curve_json(const CurveRecord& record);
CurveRecord parse_curve_json(const std::string& text);
CurveRecord read_curve_json(const std::filesystem::path& path);

/// `tenor_years,value,kind,coupon,recovery`
void write_measure_csv(std::ostream& out, const MeasureCurve& curve);
std::vector<std::pair<double, double>> parse_measure_values(std::istream& in);

/// One row of the per-bond fit report.
struct ResidualRow {
    std::string id;
    double market = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
    std::optional<double> oasf;
    std::optional<double> zspread;
    std::optional<double> market_p_spread;
};

/// `id,market,fitted,residual,oasf,zspread,market_p_spread`; unavailable
/// spreads are left empty.
void write_residuals_csv(std::ostream& out, const std::vector<ResidualRow>& rows);
std::vector<ResidualRow> parse_residuals_csv(std::istream& in);

/// `key = value` lines; `#` starts a comment. Recognized keys: recovery,
/// alpha_grid, constraint_tenors, max_reweight_passes, outlier_constant.
void apply_config(std::istream& in, FitConfig& config);
void apply_config_file(const std::filesystem::path& path, FitConfig& config);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(const std::string& text);

} // namespace credit_curves::io
