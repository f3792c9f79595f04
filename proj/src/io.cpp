#include "credit_curves/io.hpp"

#include "credit_curves/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace credit_curves::io {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double to_number(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw InvalidInput("cannot parse " + what + " '" + text + "'");
    }
    return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    return in;
}

/// Reads the header line and checks it against `expected`.
void expect_header(std::istream& in, const std::string& expected, const std::string& what) {
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) {
            break;
        }
    }
    if (line != expected) {
        throw InvalidInput(what + ": expected header '" + expected + "', got '" + line + "'");
    }
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    for (const auto& field : split(text, ',')) {
        if (!field.empty()) {
            values.push_back(to_number(field, "number"));
        }
    }
    return values;
}

std::vector<BondQuote> parse_bonds_csv(std::istream& in) {
    expect_header(in, "id,coupon_pct,frequency,maturity_years,clean_price", "bonds CSV");
    std::vector<BondQuote> bonds;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 5) {
            throw InvalidInput("bonds CSV line " + std::to_string(line_no) + ": expected 5 fields");
        }
        BondQuote b;
        b.id = f[0];
        b.coupon = to_number(f[1], "coupon_pct") / 100.0;
        const double freq = to_number(f[2], "frequency");
        b.frequency = static_cast<int>(freq);
        if (static_cast<double>(b.frequency) != freq) {
            throw InvalidInput("bonds CSV line " + std::to_string(line_no) + ": frequency must be an integer");
        }
        b.maturity = to_number(f[3], "maturity_years");
        b.clean_price = to_number(f[4], "clean_price");
        b.validate();
        bonds.push_back(std::move(b));
    }
    return bonds;
}

std::vector<BondQuote> read_bonds_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_bonds_csv(in);
}

void write_bonds_csv(std::ostream& out, const std::vector<BondQuote>& bonds) {
    out << "id,coupon_pct,frequency,maturity_years,clean_price\n";
    for (const auto& b : bonds) {
        out << b.id << ',' << format_double(b.coupon * 100.0) << ',' << b.frequency << ','
            << format_double(b.maturity) << ',' << format_double(b.clean_price) << '\n';
    }
}

DiscountCurve parse_discount_csv(std::istream& in) {
    expect_header(in, "tenor_years,zero_rate", "discount curve CSV");
    std::vector<ZeroPillar> pillars;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 2) {
            throw InvalidInput("discount curve CSV: expected 2 fields per row");
        }
        pillars.push_back({to_number(f[0], "tenor_years"), to_number(f[1], "zero_rate")});
    }
    return DiscountCurve(std::move(pillars));
}

DiscountCurve read_discount_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_discount_csv(in);
}

std::string curve_json(const CurveRecord& record) {
    const auto& c = record.curve;
    nlohmann::ordered_json j;
    j["alpha"] = c.alpha();
    j["beta1"] = c.betas()[0];
    j["beta2"] = c.betas()[1];
    j["beta3"] = c.betas()[2];
    j["t_max"] = c.t_max();
    j["recovery"] = record.recovery;
    j["wape"] = record.wape;
    j["constraint_grid"] = c.constraint_grid();
    return j.dump(2) + "\n";
}

std::string curve_json(const FitResult& fit) {
    const auto& c = fit.curve;
    nlohmann::ordered_json j;
    j["alpha"] = c.alpha();
    j["beta1"] = c.betas()[0];
    j["beta2"] = c.betas()[1];
    j["beta3"] = c.betas()[2];
    j["t_max"] = c.t_max();
    j["recovery"] = fit.recovery.principal;
    j["wape"] = fit.wape;
    j["constraint_grid"] = c.constraint_grid();
    nlohmann::ordered_json diag;
    diag["objective"] = fit.objective;
    diag["iterations"] = fit.iterations;
    diag["active_constraints"] = fit.active_constraints;
    diag["bonds"] = fit.residuals.size();
    auto scan = nlohmann::ordered_json::array();
    for (const auto& cand : fit.alpha_scan) {
        nlohmann::ordered_json e;
        e["alpha"] = cand.alpha;
        e["feasible"] = cand.feasible;
        if (cand.feasible) {
            e["objective"] = cand.objective;
            e["iterations"] = cand.iterations;
        }
        scan.push_back(e);
    }
    diag["alpha_scan"] = scan;
    j["diagnostics"] = diag;
    return j.dump(2) + "\n";
}

CurveRecord parse_curve_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        std::vector<double> grid;
        if (j.contains("constraint_grid")) {
            grid = j.at("constraint_grid").get<std::vector<double>>();
        }
        SurvivalCurve curve(j.at("alpha").get<double>(),
                            {j.at("beta1").get<double>(), j.at("beta2").get<double>(), j.at("beta3").get<double>()},
                            std::move(grid), j.value("t_max", kDefaultSurvivalHorizon));
        return {std::move(curve), j.value("recovery", 0.40), j.value("wape", 0.0)};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed curve record: ") + e.what());
    }
}

CurveRecord read_curve_json(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_curve_json(buf.str());
}

void write_measure_csv(std::ostream& out, const MeasureCurve& curve) {
    out << "tenor_years,value,kind,coupon,recovery\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        out << format_double(curve.grid[i]) << ',' << format_double(curve.values[i]) << ',' << to_string(curve.kind)
            << ',' << format_double(curve.coupon) << ',' << format_double(curve.recovery) << '\n';
    }
}

std::vector<std::pair<double, double>> parse_measure_values(std::istream& in) {
    expect_header(in, "tenor_years,value,kind,coupon,recovery", "measure CSV");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 5) {
            throw InvalidInput("measure CSV: expected 5 fields per row");
        }
        rows.emplace_back(to_number(f[0], "tenor"), to_number(f[1], "value"));
    }
    return rows;
}

void write_residuals_csv(std::ostream& out, const std::vector<ResidualRow>& rows) {
    const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    out << "id,market,fitted,residual,oasf,zspread,market_p_spread\n";
    for (const auto& r : rows) {
        out << r.id << ',' << format_double(r.market) << ',' << format_double(r.fitted) << ','
            << format_double(r.residual) << ',' << opt(r.oasf) << ',' << opt(r.zspread) << ','
            << opt(r.market_p_spread) << '\n';
    }
}

std::vector<ResidualRow> parse_residuals_csv(std::istream& in) {
    expect_header(in, "id,market,fitted,residual,oasf,zspread,market_p_spread", "residuals CSV");
    const auto opt = [](const std::string& s) -> std::optional<double> {
        if (s.empty()) {
            return std::nullopt;
        }
        return to_number(s, "spread");
    };
    std::vector<ResidualRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 7) {
            throw InvalidInput("residuals CSV: expected 7 fields per row");
        }
        rows.push_back({f[0], to_number(f[1], "market"), to_number(f[2], "fitted"), to_number(f[3], "residual"),
                        opt(f[4]), opt(f[5]), opt(f[6])});
    }
    return rows;
}

void apply_config(std::istream& in, FitConfig& config) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "recovery") {
            config.recovery = RecoveryAssumption(to_number(value, key));
        } else if (key == "alpha_grid") {
            config.alpha_grid = parse_number_list(value);
        } else if (key == "constraint_tenors") {
            config.constraint_tenors = parse_number_list(value);
        } else if (key == "max_reweight_passes") {
            const double n = to_number(value, key);
            if (n < 1 || n != static_cast<int>(n)) {
                throw InvalidInput("max_reweight_passes must be a positive integer");
            }
            config.max_reweight_passes = static_cast<int>(n);
        } else if (key == "outlier_constant") {
            config.outlier_constant = to_number(value, key);
            if (!(config.outlier_constant > 0.0)) {
                throw InvalidInput("outlier_constant must be positive");
            }
        } else {
            throw InvalidInput("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
}

void apply_config_file(const std::filesystem::path& path, FitConfig& config) {
    auto in = open_input(path);
    apply_config(in, config);
}

} // namespace credit_curves::io
