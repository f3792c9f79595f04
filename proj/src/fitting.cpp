#include "credit_curves/fitting.hpp"

#include "credit_curves/errors.hpp"
#include "credit_curves/splines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace credit_curves {

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 30; ++i) {
        grid.push_back(i / 100.0);
    }
    return grid;
}

std::vector<double> default_constraint_tenors() {
    std::vector<double> tenors;
    for (int i = 1; i <= 10; ++i) {
        tenors.push_back(i);
    }
    for (double t : {15.0, 20.0, 25.0, 30.0}) {
        tenors.push_back(t);
    }
    return tenors;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("CREDIT_CURVES_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

InequalityRow decreasing_row(double alpha, double tenor) {
    InequalityRow row{InequalityRow::Kind::Decreasing, tenor, {}};
    for (int k = 1; k <= 3; ++k) {
        row.coeffs[k - 1] = k * splines::eval_no_knot(k, tenor, alpha);
    }
    return row;
}

InequalityRow positivity_row(double alpha, double t_max) {
    InequalityRow row{InequalityRow::Kind::Positive, t_max, {}};
    for (int k = 1; k <= 3; ++k) {
        row.coeffs[k - 1] = splines::eval_no_knot(k, t_max, alpha);
    }
    return row;
}

void RegressionProblem::validate() const {
    const std::size_t n = adjusted_pv.size();
    if (regressors.size() != n || base_weights.size() != n || outlier_weights.size() != n) {
        throw InvalidInput("regression problem has inconsistent row counts");
    }
    if (n < 3) {
        throw InvalidInput("regression needs at least 3 bonds");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(base_weights[i] > 0.0)) {
            throw InvalidInput("base weights must be positive");
        }
        if (!(outlier_weights[i] > 0.0 && outlier_weights[i] <= 1.0)) {
            throw InvalidInput("outlier weights must lie in (0, 1]");
        }
    }
}

std::vector<double> RegressionProblem::residuals(const std::array<double, 3>& betas) const {
    std::vector<double> eps(rows());
    for (std::size_t q = 0; q < rows(); ++q) {
        const auto& u = regressors[q];
        eps[q] = adjusted_pv[q] - (u[0] * betas[0] + u[1] * betas[1] + u[2] * betas[2]);
    }
    return eps;
}

double RegressionProblem::objective(const std::array<double, 3>& betas) const {
    const auto eps = residuals(betas);
    double total = 0.0;
    double wsum = 0.0;
    for (std::size_t q = 0; q < rows(); ++q) {
        const double w = base_weights[q] * outlier_weights[q];
        total += w * eps[q] * eps[q];
        wsum += w;
    }
    return total / wsum;
}

std::vector<double> base_weights(const std::vector<BondQuote>& universe, const DiscountCurve& disc) {
    std::vector<double> weights;
    weights.reserve(universe.size());
    for (const auto& bond : universe) {
        const Schedule sched = build_schedule(bond);
        double duration = 0.0;
        try {
            duration = spread_duration(sched, disc, solve_zspread(bond, disc));
        } catch (const UnattainablePrice&) {
            duration = spread_duration(sched, disc, 0.0);
        }
        weights.push_back(1.0 / (duration * duration));
    }
    return weights;
}

RegressionProblem build_regressors(const std::vector<BondQuote>& universe, const DiscountCurve& disc, double alpha,
                                   const RecoveryAssumption& rec, const std::vector<double>& constraint_tenors,
                                   double t_max, std::optional<std::vector<double>> weights) {
    if (universe.size() < 3) {
        throw InvalidInput("survival fit needs at least 3 bonds, got " + std::to_string(universe.size()));
    }
    const splines::SplineBasis basis(alpha);
    const double r = rec.principal;

    RegressionProblem problem;
    problem.alpha = alpha;
    problem.regressors.reserve(universe.size());
    problem.adjusted_pv.reserve(universe.size());
    for (const auto& bond : universe) {
        const Schedule sched = build_schedule(bond);
        const auto& times = sched.payment_times;
        const std::size_t n = times.size();
        const double c = sched.coupon_amount;

        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = disc.discount(times[i]);
        }
        std::array<double, 3> u{};
        for (std::size_t i = 0; i < n; ++i) {
            const double loading = i + 1 < n ? c * z[i] - r * (z[i] - z[i + 1]) : (c + 1.0 - r) * z[i];
            const auto row = splines::basis_row(basis, times[i]);
            for (int k = 0; k < 3; ++k) {
                u[k] += row[k] * loading;
            }
        }
        problem.regressors.push_back(u);
        problem.adjusted_pv.push_back(bond.clean_price / 100.0 + sched.accrued_amount - r * z[0]);
    }
    problem.base_weights = weights ? std::move(*weights) : base_weights(universe, disc);
    problem.outlier_weights.assign(universe.size(), 1.0);
    for (double tc : constraint_tenors) {
        problem.inequalities.push_back(decreasing_row(alpha, tc));
    }
    problem.inequalities.push_back(positivity_row(alpha, t_max));
    problem.validate();
    return problem;
}

namespace {

using Vec2 = std::array<double, 2>;

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

/// The problem after substituting beta_3 = 1 - beta_1 - beta_2:
/// minimize sum w_q (y_q - a_q . g)^2  s.t.  c_j . g >= b_j.
struct ReducedProblem {
    std::vector<Vec2> design;
    std::vector<double> target;
    std::vector<double> weights;
    std::vector<Vec2> normals;
    std::vector<double> bounds;

    double objective(const Vec2& g) const {
        double total = 0.0;
        for (std::size_t q = 0; q < target.size(); ++q) {
            const double e = target[q] - dot(design[q], g);
            total += weights[q] * e * e;
        }
        return total;
    }

    bool feasible(const Vec2& g) const {
        for (std::size_t j = 0; j < normals.size(); ++j) {
            const double lhs = dot(normals[j], g);
            const double scale = std::abs(normals[j][0] * g[0]) + std::abs(normals[j][1] * g[1]) + std::abs(bounds[j]);
            if (lhs < bounds[j] - 1e-13 * std::max(scale, 1e-8)) {
                return false;
            }
        }
        return true;
    }
};

ReducedProblem reduce(const RegressionProblem& p) {
    ReducedProblem r;
    const std::size_t n = p.rows();
    double wsum = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        wsum += p.base_weights[q] * p.outlier_weights[q];
    }
    for (std::size_t q = 0; q < n; ++q) {
        const auto& u = p.regressors[q];
        r.design.push_back({u[0] - u[2], u[1] - u[2]});
        r.target.push_back(p.adjusted_pv[q] - u[2]);
        r.weights.push_back(p.base_weights[q] * p.outlier_weights[q] / wsum);
    }
    for (const auto& row : p.inequalities) {
        const auto& a = row.coeffs;
        r.normals.push_back({a[0] - a[2], a[1] - a[2]});
        r.bounds.push_back(p.margin - a[2]);
    }
    return r;
}

/// Unconstrained weighted least squares via a two-column QR of sqrt(W) A.
Vec2 unconstrained_minimizer(const ReducedProblem& r) {
    const std::size_t n = r.target.size();
    std::vector<double> c1(n), c2(n), y(n);
    for (std::size_t q = 0; q < n; ++q) {
        const double s = std::sqrt(r.weights[q]);
        c1[q] = s * r.design[q][0];
        c2[q] = s * r.design[q][1];
        y[q] = s * r.target[q];
    }
    const auto inner = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double t = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            t += a[q] * b[q];
        }
        return t;
    };
    const double r11 = std::sqrt(inner(c1, c1));
    const double r22_raw = std::sqrt(inner(c2, c2));
    if (r11 <= 1e-300) {
        if (r22_raw <= 1e-300) {
            return {0.0, 0.0};
        }
        return {0.0, inner(c2, y) / (r22_raw * r22_raw)};
    }
    for (auto& v : c1) {
        v /= r11;
    }
    double r12 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const double proj = inner(c1, c2);
        r12 += proj;
        for (std::size_t q = 0; q < n; ++q) {
            c2[q] -= proj * c1[q];
        }
    }
    const double r22 = std::sqrt(inner(c2, c2));
    const double qy1 = inner(c1, y);
    if (r22 <= 1e-14 * std::max(r11, r22_raw)) {
        return {qy1 / r11, 0.0};
    }
    const double g2 = inner(c2, y) / (r22 * r22);
    return {(qy1 - r12 * g2) / r11, g2};
}

/// Minimizer on the line c . g = b.
std::optional<Vec2> line_minimizer(const ReducedProblem& r, const Vec2& c, double b) {
    const double cc = dot(c, c);
    if (cc <= 1e-300) {
        return std::nullopt;
    }
    const Vec2 base{c[0] * b / cc, c[1] * b / cc};
    const double cn = std::sqrt(cc);
    const Vec2 dir{-c[1] / cn, c[0] / cn};
    double num = 0.0;
    double den = 0.0;
    for (std::size_t q = 0; q < r.target.size(); ++q) {
        const double ad = dot(r.design[q], dir);
        const double e = r.target[q] - dot(r.design[q], base);
        num += r.weights[q] * ad * e;
        den += r.weights[q] * ad * ad;
    }
    const double tau = den > 1e-300 ? num / den : 0.0;
    return Vec2{base[0] + tau * dir[0], base[1] + tau * dir[1]};
}

/// Intersection of c1 . g = b1 and c2 . g = b2.
std::optional<Vec2> vertex(const Vec2& c1, double b1, const Vec2& c2, double b2) {
    const double det = c1[0] * c2[1] - c1[1] * c2[0];
    const double scale = std::sqrt(dot(c1, c1) * dot(c2, c2));
    if (std::abs(det) <= 1e-12 * scale) {
        return std::nullopt;
    }
    return Vec2{(b1 * c2[1] - b2 * c1[1]) / det, (c1[0] * b2 - c2[0] * b1) / det};
}

} // namespace

WlsSolution solve_constrained_wls(const RegressionProblem& problem) {
    problem.validate();
    const ReducedProblem r = reduce(problem);
    const std::size_t m = r.normals.size();

    std::optional<Vec2> best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_active;
    const auto consider = [&](const std::optional<Vec2>& g, std::vector<std::size_t> active) {
        if (!g || !std::isfinite((*g)[0]) || !std::isfinite((*g)[1]) || !r.feasible(*g)) {
            return;
        }
        const double obj = r.objective(*g);
        if (obj < best_obj) {
            best = g;
            best_obj = obj;
            best_active = std::move(active);
        }
    };

    consider(unconstrained_minimizer(r), {});
    for (std::size_t j = 0; j < m; ++j) {
        consider(line_minimizer(r, r.normals[j], r.bounds[j]), {j});
    }
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            consider(vertex(r.normals[j], r.bounds[j], r.normals[k], r.bounds[k]), {j, k});
        }
    }
    if (!best) {
        throw InfeasibleFit("no survival curve satisfies the monotonicity and positivity constraints (alpha = " +
                            std::to_string(problem.alpha) + ")");
    }
    WlsSolution sol;
    sol.betas = {(*best)[0], (*best)[1], 1.0 - (*best)[0] - (*best)[1]};
    sol.objective = best_obj;
    sol.active = std::move(best_active);
    return sol;
}

std::vector<double> reweight_outliers(const std::vector<double>& residuals, const std::vector<double>& base,
                                      double tuning_constant) {
    const std::size_t n = residuals.size();
    if (n < 3) {
        throw InvalidInput("outlier reweighting needs at least 3 residuals");
    }
    if (base.size() != n) {
        throw InvalidInput("residual and weight counts differ");
    }
    double mean_w = 0.0;
    for (double w : base) {
        mean_w += w;
    }
    mean_w /= static_cast<double>(n);

    std::vector<double> scaled(n);
    for (std::size_t q = 0; q < n; ++q) {
        scaled[q] = residuals[q] * std::sqrt(base[q] / mean_w);
    }
    const auto median = [](std::vector<double> v) {
        const std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
        const double upper = v[mid];
        if (v.size() % 2 == 1) {
            return upper;
        }
        return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    };
    const double center = median(scaled);
    std::vector<double> dev(n);
    double max_dev = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        dev[q] = std::abs(scaled[q] - center);
        max_dev = std::max(max_dev, dev[q]);
    }
    // Residuals at round-off level carry no information about outliers.
    constexpr double kScaleFloor = 1e-12;
    std::vector<double> weights(n, 1.0);
    if (max_dev <= kScaleFloor) {
        return weights;
    }
    const double sigma = std::max(1.4826 * median(dev), kScaleFloor);
    for (std::size_t q = 0; q < n; ++q) {
        const double u = (scaled[q] - center) / (tuning_constant * sigma);
        const double w = std::abs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        weights[q] = std::max(w, kOutlierWeightFloor);
    }
    return weights;
}

namespace {

/// Re-solves with extra decreasing-rows until Q is non-increasing on the
/// whole horizon, not only at the grid tenors.
WlsSolution solve_continuous(RegressionProblem& problem, double t_max) {
    for (int cut = 0; cut < 50; ++cut) {
        WlsSolution sol = solve_constrained_wls(problem);
        const SurvivalCurve trial(problem.alpha, sol.betas, {}, t_max);
        const auto slope = trial.min_decay_slope();
        if (slope.value > 0.0) {
            return sol;
        }
        problem.inequalities.push_back(decreasing_row(problem.alpha, slope.tenor));
    }
    throw InfeasibleFit("could not enforce a decreasing survival curve between constraint tenors");
}

double max_abs_diff(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double d = 0.0;
    for (int k = 0; k < 3; ++k) {
        d = std::max(d, std::abs(a[k] - b[k]));
    }
    return d;
}

} // namespace

FitResult fit_survival_at(const std::vector<BondQuote>& universe, const DiscountCurve& disc, double alpha,
                          const FitConfig& config, const std::vector<double>& base) {
    RegressionProblem problem =
        build_regressors(universe, disc, alpha, config.recovery, config.constraint_tenors, config.t_max, base);
    problem.margin = config.constraint_margin;

    WlsSolution sol;
    std::array<double, 3> prev{};
    int pass = 0;
    while (true) {
        ++pass;
        sol = solve_continuous(problem, config.t_max);
        if (!config.reweight || pass >= config.max_reweight_passes) {
            break;
        }
        if (pass > 1 && max_abs_diff(sol.betas, prev) < config.beta_tolerance) {
            break;
        }
        auto next = reweight_outliers(problem.residuals(sol.betas), problem.base_weights, config.outlier_constant);
        double change = 0.0;
        for (std::size_t q = 0; q < next.size(); ++q) {
            change = std::max(change, std::abs(next[q] - problem.outlier_weights[q]));
        }
        if (change < 1e-12) {
            break;
        }
        problem.outlier_weights = std::move(next);
        prev = sol.betas;
    }

    std::vector<double> grid;
    std::vector<double> active;
    for (const auto& row : problem.inequalities) {
        if (row.kind == InequalityRow::Kind::Decreasing) {
            grid.push_back(row.tenor);
        }
    }
    for (std::size_t j : sol.active) {
        active.push_back(problem.inequalities[j].tenor);
    }
    std::sort(active.begin(), active.end());

    FitResult result{SurvivalCurve(alpha, sol.betas, grid, config.t_max), config.recovery, {}, {}, {}, {}, {}, 0.0, 0.0, {}, 0, {}};
    if (!check_survival_invariants(result.curve).ok()) {
        throw InfeasibleFit("fitted survival curve violates its invariants (alpha = " + std::to_string(alpha) + ")");
    }
    result.base_weights = problem.base_weights;
    result.outlier_weights = problem.outlier_weights;
    double wsum = 0.0;
    for (std::size_t q = 0; q < problem.rows(); ++q) {
        result.weights.push_back(problem.base_weights[q] * problem.outlier_weights[q]);
        wsum += result.weights.back();
    }
    for (double& w : result.weights) {
        w /= wsum;
    }
    result.objective = problem.objective(sol.betas);
    result.wape = 100.0 * std::sqrt(result.objective);
    result.active_constraints = std::move(active);
    result.iterations = pass;
    for (const auto& bond : universe) {
        const double fitted = fitted_clean_price(bond, disc, result.curve, config.recovery);
        result.fitted_prices.push_back(fitted);
        result.residuals.push_back(bond.clean_price - fitted);
    }
    return result;
}

FitResult fit_survival(const std::vector<BondQuote>& universe, const DiscountCurve& disc, const FitConfig& config) {
    if (config.alpha_grid.empty()) {
        throw InvalidInput("decay-factor grid is empty");
    }
    if (universe.size() < 3) {
        throw InvalidInput("survival fit needs at least 3 bonds, got " + std::to_string(universe.size()));
    }
    for (const auto& bond : universe) {
        bond.validate();
    }
    const std::vector<double> base = base_weights(universe, disc);
    const std::size_t n = config.alpha_grid.size();

    std::vector<std::optional<FitResult>> fits(n);
    std::vector<std::string> failures(n);
    const auto run = [&](std::size_t i) {
        try {
            fits[i] = fit_survival_at(universe, disc, config.alpha_grid[i], config, base);
        } catch (const InfeasibleFit& e) {
            failures[i] = e.what();
        }
    };
    const unsigned threads = std::min<unsigned>(config.threads ? config.threads : default_thread_count(),
                                                static_cast<unsigned>(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            run(i);
        }
    } else {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += threads) {
                    run(i);
                }
            });
        }
    }

    std::optional<std::size_t> best;
    std::vector<AlphaCandidate> scan;
    for (std::size_t i = 0; i < n; ++i) {
        AlphaCandidate cand{config.alpha_grid[i], fits[i].has_value(), 0.0, 0};
        if (fits[i]) {
            cand.objective = fits[i]->objective;
            cand.iterations = fits[i]->iterations;
            if (!best || cand.objective < fits[*best]->objective) {
                best = i;
            }
        }
        scan.push_back(cand);
    }
    if (!best) {
        throw InfeasibleFit(failures.front());
    }
    FitResult result = std::move(*fits[*best]);
    result.alpha_scan = std::move(scan);
    return result;
}

} // namespace credit_curves
