#pragma once

#include "credit_curves/cashflows.hpp"
#include "credit_curves/curves.hpp"
#include "credit_curves/pricing.hpp"

#include <array>
#include <optional>
#include <vector>

namespace credit_curves {

/// {0.01, 0.02, ..., 0.30}
std::vector<double> default_alpha_grid();
/// {1, 2, ..., 10, 15, 20, 25, 30}
std::vector<double> default_constraint_tenors();

inline constexpr double kTukeyConstant = 4.685;
inline constexpr double kOutlierWeightFloor = 1e-6;

struct FitConfig {
    std::vector<double> alpha_grid = default_alpha_grid();
    RecoveryAssumption recovery{0.40};
    std::vector<double> constraint_tenors = default_constraint_tenors();
    double t_max = kDefaultSurvivalHorizon;
    int max_reweight_passes = 10;
    double outlier_constant = kTukeyConstant;
    /// Stop reweighting once max |delta beta| falls below this.
    double beta_tolerance = 1e-8;
    /// Strict inequalities are enforced as ">= margin".
    double constraint_margin = 1e-8;
    bool reweight = true;
    /// Worker threads for the alpha scan; 0 picks from CREDIT_CURVES_THREADS
    /// or the hardware.
    unsigned threads = 0;
};

/// One linear inequality sum_k coeffs[k] beta_k >= margin.
struct InequalityRow {
    enum class Kind { Decreasing, Positive };
    Kind kind = Kind::Decreasing;
    double tenor = 0.0;
    std::array<double, 3> coeffs{};
};

/// V = U beta + eps, with sum(beta) = 1 and inequality rows.
struct RegressionProblem {
    double alpha = 0.0;
    std::vector<std::array<double, 3>> regressors;
    std::vector<double> adjusted_pv;
    std::vector<double> base_weights;
    std::vector<double> outlier_weights;
    std::vector<InequalityRow> inequalities;
    double margin = 1e-8;

    std::size_t rows() const { return adjusted_pv.size(); }
    void validate() const;
    /// V - U beta.
    std::vector<double> residuals(const std::array<double, 3>& betas) const;
    /// sum w_sd w_out eps^2 with combined weights normalized to sum to one.
    double objective(const std::array<double, 3>& betas) const;
};

InequalityRow decreasing_row(double alpha, double tenor);
InequalityRow positivity_row(double alpha, double t_max);

/// Spread-duration weights 1/D^2 (D from the solved Z-spread, falling back
/// to the zero-spread duration when no Z-spread exists).
std::vector<double> base_weights(const std::vector<BondQuote>& universe, const DiscountCurve& disc);

/// Regressors and adjusted present values for decay factor `alpha`, with
/// decreasing-rows at `constraint_tenors` and a positivity row at `t_max`.
/// Outlier weights start at one.
RegressionProblem build_regressors(const std::vector<BondQuote>& universe, const DiscountCurve& disc, double alpha,
                                   const RecoveryAssumption& rec,
                                   const std::vector<double>& constraint_tenors = default_constraint_tenors(),
                                   double t_max = kDefaultSurvivalHorizon,
                                   std::optional<std::vector<double>> weights = std::nullopt);

struct WlsSolution {
    std::array<double, 3> betas{};
    double objective = 0.0;
    /// Indices into problem.inequalities held as equalities at the optimum.
    std::vector<std::size_t> active;
};

/// Minimizes the weighted squared residuals subject to sum(beta) = 1 and all
/// inequality rows. The equality is eliminated by substitution; the
/// remaining two-dimensional QP is solved by enumerating active sets of size
/// 0, 1 and 2 and keeping the best feasible candidate.
/// Throws InfeasibleFit when no candidate satisfies the constraints.
WlsSolution solve_constrained_wls(const RegressionProblem& problem);

/// Tukey bisquare weights of residuals scaled by sqrt(base weight), centered
/// on their median and scaled by 1.4826 * MAD. Weights are floored at 1e-6.
/// Residuals without dispersion get weight one.
std::vector<double> reweight_outliers(const std::vector<double>& residuals, const std::vector<double>& base_weights,
                                      double tuning_constant = kTukeyConstant);

struct AlphaCandidate {
    double alpha = 0.0;
    bool feasible = false;
    double objective = 0.0;
    int iterations = 0;
};

struct FitResult {
    SurvivalCurve curve;
    RecoveryAssumption recovery;
    /// Per bond, in price points per 100: market clean - fitted clean.
    std::vector<double> residuals;
    std::vector<double> fitted_prices;
    std::vector<double> base_weights;
    std::vector<double> outlier_weights;
    /// Combined weights, normalized to sum to one.
    std::vector<double> weights;
    /// sqrt of the normalized objective, in price points per 100.
    double wape = 0.0;
    double objective = 0.0;
    /// Tenors of the inequality rows binding at the optimum.
    std::vector<double> active_constraints;
    int iterations = 0;
    std::vector<AlphaCandidate> alpha_scan;
};

/// Robust constrained fit at a single decay factor. Tenors where the
/// continuous curve would turn upward between grid points are added to the
/// decreasing-rows and the problem re-solved.
FitResult fit_survival_at(const std::vector<BondQuote>& universe, const DiscountCurve& disc, double alpha,
                          const FitConfig& config, const std::vector<double>& base);

/// Full estimation over config.alpha_grid, keeping the decay factor with
/// the lowest final objective.
FitResult fit_survival(const std::vector<BondQuote>& universe, const DiscountCurve& disc,
                       const FitConfig& config = {});

/// Thread count from CREDIT_CURVES_THREADS, else hardware concurrency.
unsigned default_thread_count();

} // namespace credit_curves
