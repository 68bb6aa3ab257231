#include "tridge_app/app.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tridge/tridge_all.hpp"

namespace tridge::app {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view s) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
    return value;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot open output file " + path);
    file << text;
    if (!file) throw InvalidArgument("failed writing output file " + path);
}

Json vector_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

/// Parsed `--estimator` value.
struct EstimatorSpec {
    enum class Kind { tridge, ridge, edr, cv, mle } kind = Kind::tridge;
    double value = 0.0;
    int folds = 0;
    std::string text;
};

EstimatorSpec parse_estimator_spec(const std::string& text) {
    EstimatorSpec spec;
    spec.text = text;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string_view arg =
        colon == std::string::npos ? std::string_view{} : std::string_view(text).substr(colon + 1);
    auto need_arg = [&](const char* what) {
        const auto v = parse_number(arg);
        if (colon == std::string::npos || !v || !std::isfinite(*v)) {
            throw InvalidArgument("estimator " + head + " needs a numeric " + what + ", e.g. " +
                                  head + ":1");
        }
        return *v;
    };
    if (head == "tridge" || head == "mle") {
        if (colon != std::string::npos) throw InvalidArgument(head + " takes no argument");
        spec.kind = head == "tridge" ? EstimatorSpec::Kind::tridge : EstimatorSpec::Kind::mle;
    } else if (head == "ridge") {
        spec.kind = EstimatorSpec::Kind::ridge;
        spec.value = need_arg("r");
        if (spec.value < 0.0) throw InvalidArgument("ridge r must be non-negative");
    } else if (head == "edr") {
        spec.kind = EstimatorSpec::Kind::edr;
        spec.value = need_arg("lambda");
        if (!(spec.value > 0.0)) throw InvalidArgument("edr lambda must be positive");
    } else if (head == "cv") {
        spec.kind = EstimatorSpec::Kind::cv;
        const double k = need_arg("fold count");
        if (k != std::floor(k) || k < 2.0) throw InvalidArgument("cv fold count must be an integer >= 2");
        spec.folds = static_cast<int>(k);
    } else {
        throw InvalidArgument("unknown estimator '" + text +
                              "' (expected tridge, ridge:<r>, edr:<lambda>, cv:<K> or mle)");
    }
    return spec;
}

Family require_family(const std::string& name) {
    const auto f = parse_family(name);
    if (!f) throw InvalidArgument("unknown family '" + name + "'");
    return *f;
}

void require_format(const std::string& format) {
    if (format != "json" && format != "csv") {
        throw InvalidArgument("unknown format '" + format + "' (expected json or csv)");
    }
}

// Common fields of every fitted model.
Json describe_fit(Family family, const Dataset& data, const Coefficients& beta) {
    Json j;
    j["beta"] = vector_json(beta);
    const double datafit = negative_loglik(family, data, beta);
    const double score_norm = score(family, data, beta).norm();
    j["lambda_hat"] = score_norm;
    j["objective"] = score_norm > score_tolerance(data) && beta.norm() > 0.0
                         ? Json(datafit / score_norm + beta.norm())
                         : Json(nullptr);
    j["datafit"] = datafit;
    const double dz = datafit_dead_zone(data);
    j["datafit_sign"] = datafit > dz ? "positive" : datafit < -dz ? "negative" : "zero";
    return j;
}

std::string beta_csv(const Coefficients& beta) {
    std::string s = "index,beta\n";
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        s += std::to_string(i) + "," + format_double(beta[i]) + "\n";
    }
    return s;
}

struct FitOptions {
    std::string input;
    std::string family = "gaussian";
    std::string estimator = "tridge";
    double c = 0.1;
    int m = 1000;
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "json";
};

int cmd_fit(const FitOptions& o, std::ostream& out) {
    require_format(o.format);
    const Family family = require_family(o.family);
    const EstimatorSpec spec = parse_estimator_spec(o.estimator);
    if (!(o.c > 0.0)) throw InvalidArgument("--c must be positive");
    if (o.m < 2) throw InvalidArgument("--m must be at least 2");
    const Dataset data = read_csv_file(o.input);
    validate(family, data);

    Json doc;
    doc["estimator"] = spec.text;
    doc["family"] = std::string(to_string(family));
    doc["n"] = data.n();
    doc["p"] = data.p();
    Coefficients beta;
    Json diagnostics;
    double selected_r = std::numeric_limits<double>::quiet_NaN();

    switch (spec.kind) {
    case EstimatorSpec::Kind::tridge: {
        TridgeConfig config;
        config.c = o.c;
        config.m = o.m;
        const TridgeFit fit = tridge_fit(family, data, config);
        beta = fit.beta;
        selected_r = fit.selected_r;
        diagnostics["stationary_status"] = std::string(to_string(fit.sp_status));
        diagnostics["stationary_iterations"] = fit.sp_iterations;
        diagnostics["stationary_r"] = number_or_null(fit.sp_r);
        diagnostics["grid"] = {{"r_min", fit.grid.r_min},
                               {"r_max", fit.grid.r_max},
                               {"m", fit.grid.m},
                               {"degenerate", fit.grid.degenerate}};
        diagnostics["selected_index"] = fit.selected_index;
        diagnostics["kkt_residual"] = fit.kkt_residual;
        diagnostics["lambda_order"] =
            std::string(to_string(lambda_order_diagnostic(family, data, fit)));
        break;
    }
    case EstimatorSpec::Kind::ridge:
    case EstimatorSpec::Kind::mle: {
        const double r = spec.kind == EstimatorSpec::Kind::mle ? 0.0 : spec.value;
        const RidgeSolution sol = fit_ridge(family, data, r);
        beta = sol.beta;
        selected_r = r;
        diagnostics["kkt_residual"] = sol.kkt_residual;
        diagnostics["iterations"] = sol.iterations;
        break;
    }
    case EstimatorSpec::Kind::edr: {
        const RidgeSolution sol = edr_fit(family, data, spec.value);
        beta = sol.beta;
        selected_r = sol.r;
        diagnostics["kkt_residual"] = sol.kkt_residual;
        diagnostics["iterations"] = sol.iterations;
        diagnostics["zero_solution"] = std::isinf(sol.r);
        break;
    }
    case EstimatorSpec::Kind::cv: {
        if (spec.folds > data.n()) throw InvalidArgument("cv fold count exceeds sample size");
        CvConfig config;
        config.folds = spec.folds;
        config.seed = o.seed;
        const CvResult cv = kfold_cv_ridge(family, data, config);
        beta = cv.beta;
        selected_r = cv.selected_r;
        diagnostics["folds"] = cv.folds;
        diagnostics["fold_seed"] = cv.fold_seed;
        diagnostics["selected_index"] = cv.selected_index;
        diagnostics["r_grid"] = cv.r_grid;
        Json losses = Json::array();
        for (double v : cv.cv_loss) losses.push_back(number_or_null(v));
        diagnostics["cv_loss"] = losses;
        diagnostics["kkt_residual"] = cv.refit.kkt_residual;
        break;
    }
    }

    if (o.format == "csv") {
        write_text(beta_csv(beta), o.output, out);
        return kOk;
    }
    doc["selected_r"] = number_or_null(selected_r);
    const Json summary = describe_fit(family, data, beta);
    for (const auto& [key, value] : summary.items()) doc[key] = value;
    doc["diagnostics"] = diagnostics;
    write_text(doc.dump(2) + "\n", o.output, out);
    return kOk;
}

struct SimulateOptions {
    std::string family = "gaussian";
    long n = 100;
    long p = 300;
    double k = 0.0;
    double snr = 10.0;
    int replications = 100;
    std::uint64_t seed = 0;
    std::vector<std::string> estimators{"tridge", "cv5", "cv10"};
    bool allow_any_k = false;
    std::string output;
    std::string format = "json";
};

bool documented_k(double k) {
    for (double v : {0.0, 0.2, 0.4}) {
        if (std::abs(k - v) <= 1e-12) return true;
    }
    return false;
}

std::vector<Estimator> parse_estimator_list(const std::vector<std::string>& names) {
    std::vector<Estimator> list;
    for (const auto& name : names) {
        const auto e = parse_estimator(name);
        if (!e) throw InvalidArgument("unknown estimator '" + name + "' (expected tridge, cv5, cv10, mle)");
        list.push_back(*e);
    }
    if (list.empty()) throw InvalidArgument("at least one estimator is required");
    return list;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    require_format(o.format);
    if (!o.allow_any_k && !documented_k(o.k)) {
        throw InvalidArgument("--k must be one of 0, 0.2, 0.4 (pass --allow-any-k to override)");
    }
    SimConfig config;
    config.family = require_family(o.family);
    config.n = o.n;
    config.p = o.p;
    config.k = o.k;
    config.snr = o.snr;
    config.replications = o.replications;
    config.seed = o.seed;
    config.estimators = parse_estimator_list(o.estimators);
    validate(config);

    const SimReport report = run_experiment(config);
    for (std::size_t i = 0; i < report.failed_replications.size(); ++i) {
        err << "replication " << report.failed_replications[i]
            << " failed: " << report.failure_messages[i] << "\n";
    }
    if (o.output.empty()) {
        out << (o.format == "json" ? report_to_json(report) : report_to_csv(report));
    } else {
        write_text(report_to_json(report), o.output + ".json", out);
        write_text(report_to_csv(report), o.output + ".csv", out);
    }
    if (!report.valid) {
        err << "more than 5% of replications failed\n";
        return kSolverFailure;
    }
    return kOk;
}

struct ReproduceOptions {
    std::string id;
    bool fast = false;
    int replications = 0;
    std::uint64_t seed = 7;
    bool check = false;
    std::string output;
    std::string format = "csv";
};

int effective_replications(const ReproduceOptions& o) {
    if (o.replications > 0) return o.replications;
    return o.fast ? 20 : 100;
}

int reproduce_figure(const ReproduceOptions& o, std::ostream& out, std::ostream& err) {
    const ConvergenceCriterion criterion = reference_convergence();
    ConvergenceConfig config;
    config.n_grid = criterion.n_grid;
    config.p = criterion.p;
    config.k = criterion.k;
    config.family = criterion.family;
    config.replications = effective_replications(o);
    config.seed = o.seed;
    const auto curve = mle_convergence_study(config);

    std::vector<double> errors;
    for (const auto& pt : curve) errors.push_back(pt.relative_error);
    const CurveCheck check = check_curve(criterion, errors);

    if (o.format == "json") {
        Json doc;
        doc["id"] = "fig1";
        doc["replications"] = config.replications;
        doc["seed"] = config.seed;
        Json points = Json::array();
        for (const auto& pt : curve) {
            points.push_back({{"n", pt.n},
                              {"relative_error", number_or_null(pt.relative_error)},
                              {"replications_used", pt.replications_used},
                              {"mle_failures", pt.mle_failures}});
        }
        doc["points"] = points;
        doc["inversions"] = check.inversions;
        doc["final_ratio"] = number_or_null(check.final_ratio);
        doc["pass"] = check.pass;
        write_text(doc.dump(2) + "\n", o.output, out);
    } else {
        std::string csv = "n,relative_error,replications_used,mle_failures\n";
        for (const auto& pt : curve) {
            csv += std::to_string(pt.n) + "," + format_double(pt.relative_error) + "," +
                   std::to_string(pt.replications_used) + "," + std::to_string(pt.mle_failures) +
                   "\n";
        }
        write_text(csv, o.output, out);
    }
    err << "fig1: " << check.detail << (check.pass ? " [pass]" : " [fail]") << "\n";
    return o.check && !check.pass ? kCheckFailed : kOk;
}

int cmd_reproduce(const ReproduceOptions& o, std::ostream& out, std::ostream& err) {
    require_format(o.format);
    if (o.id == "fig1") return reproduce_figure(o, out, err);
    const auto cells = reference_cells(o.id);
    if (cells.empty()) {
        throw InvalidArgument("unknown table id '" + o.id + "' (expected 2-7 or fig1)");
    }

    bool all_pass = true;
    std::string csv =
        "table,family,n,p,k,estimator,mean,sd,reference_mean,reference_sd,replications,cell_pass\n";
    Json rows = Json::array();
    for (const auto& cell : cells) {
        SimConfig config;
        config.family = cell.family;
        config.n = cell.n;
        config.p = cell.p;
        config.k = cell.k;
        config.replications = effective_replications(o);
        config.seed = o.seed;
        const SimReport report = run_experiment(config);

        auto mean_of = [&](Estimator e) {
            for (const auto& s : report.estimators) {
                if (s.estimator == e) return s.mean;
            }
            return std::numeric_limits<double>::quiet_NaN();
        };
        const CellCheck check = check_cell(cell, mean_of(Estimator::tridge), mean_of(Estimator::cv5));
        const bool pass = check.pass() && report.valid;
        all_pass = all_pass && pass;
        err << "table " << cell.table << " " << to_string(cell.family) << " (" << cell.n << ","
            << cell.p << ") k=" << format_double(cell.k) << ": " << check.detail
            << (pass ? " [pass]" : " [fail]") << "\n";

        for (const auto& s : report.estimators) {
            const ReferenceValue ref = s.estimator == Estimator::tridge ? cell.tridge
                                       : s.estimator == Estimator::cv5  ? cell.cv5
                                                                        : cell.cv10;
            const std::string name(to_string(s.estimator));
            csv += cell.table + "," + std::string(to_string(cell.family)) + "," +
                   std::to_string(cell.n) + "," + std::to_string(cell.p) + "," +
                   format_double(cell.k) + "," + name + "," + format_double(s.mean) + "," +
                   format_double(s.sd) + "," + format_double(ref.mean) + "," +
                   format_double(ref.sd) + "," +
                   std::to_string(report.replications_used.size()) + "," +
                   (pass ? "true" : "false") + "\n";
            rows.push_back({{"table", cell.table},
                            {"family", std::string(to_string(cell.family))},
                            {"n", cell.n},
                            {"p", cell.p},
                            {"k", cell.k},
                            {"estimator", name},
                            {"mean", number_or_null(s.mean)},
                            {"sd", number_or_null(s.sd)},
                            {"reference_mean", ref.mean},
                            {"reference_sd", ref.sd},
                            {"replications", report.replications_used.size()},
                            {"cell_pass", pass}});
        }
    }
    if (o.format == "json") {
        write_text(Json{{"id", o.id}, {"seed", o.seed}, {"rows", rows}}.dump(2) + "\n", o.output, out);
    } else {
        write_text(csv, o.output, out);
    }
    return o.check && !all_pass ? kCheckFailed : kOk;
}

struct PathOptions {
    std::string input;
    std::string family = "gaussian";
    double r_min = 1e-3;
    double r_max = 1e3;
    int points = 50;
    std::vector<double> grid;
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "csv";
};

int cmd_path(const PathOptions& o, std::ostream& out) {
    require_format(o.format);
    const Family family = require_family(o.family);
    std::vector<double> grid = o.grid;
    if (grid.empty()) {
        if (!(o.r_min > 0.0) || !(o.r_max > o.r_min)) {
            throw InvalidArgument("need 0 < --r-min < --r-max");
        }
        if (o.points < 2) throw InvalidArgument("--points must be at least 2");
        const double a = std::log(o.r_min);
        const double b = std::log(o.r_max);
        for (int i = 0; i < o.points; ++i) {
            grid.push_back(i + 1 == o.points ? o.r_max : std::exp(a + (b - a) * i / (o.points - 1)));
        }
        grid.front() = o.r_min;
    }
    const Dataset data = read_csv_file(o.input);
    validate(family, data);
    const RidgePath path = ridge_path(family, data, grid);
    const double eps = score_tolerance(data);

    std::string csv = "r,lambda,score_norm,beta_norm,datafit,objective,kkt_residual,iterations\n";
    Json rows = Json::array();
    for (const auto& e : path.entries) {
        const Coefficients& beta = e.solution.beta;
        const double sn = score(family, data, beta).norm();
        const double bn = beta.norm();
        const double datafit = negative_loglik(family, data, beta);
        const double objective =
            sn > eps && bn > 0.0 ? datafit / sn + bn : std::numeric_limits<double>::quiet_NaN();
        csv += format_double(e.r) + "," + format_double(e.lambda_edr) + "," + format_double(sn) +
               "," + format_double(bn) + "," + format_double(datafit) + "," +
               format_double(objective) + "," + format_double(e.solution.kkt_residual) + "," +
               std::to_string(e.solution.iterations) + "\n";
        rows.push_back({{"r", e.r},
                        {"lambda", e.lambda_edr},
                        {"score_norm", sn},
                        {"beta_norm", bn},
                        {"datafit", datafit},
                        {"objective", number_or_null(objective)},
                        {"kkt_residual", e.solution.kkt_residual},
                        {"iterations", e.solution.iterations},
                        {"beta", vector_json(beta)}});
    }
    if (o.format == "json") {
        write_text(Json{{"family", std::string(to_string(family))}, {"path", rows}}.dump(2) + "\n",
                   o.output, out);
    } else {
        write_text(csv, o.output, out);
    }
    return kOk;
}

void describe_error(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (const auto* nc = dynamic_cast<const NonConvergence*>(&e)) {
        err << "  iterations: " << nc->iterations << "\n"
            << "  residual: " << format_double(nc->residual) << "\n";
    } else if (const auto* vs = dynamic_cast<const VanishingScore*>(&e)) {
        err << "  score norm: " << format_double(vs->score_norm) << "\n";
    } else if (const auto* pf = dynamic_cast<const PathPointFailure*>(&e)) {
        err << "  grid index: " << pf->index << "\n";
    }
}

} // namespace

Dataset read_csv(std::istream& in) {
    std::string line;
    long line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw InvalidData("input is empty; expected a header row", 0, -1);
    for (auto cell : split(line)) header.emplace_back(cell);
    if (header.front() != "y") {
        throw InvalidData("line " + std::to_string(line_no) +
                              ": first header column must be 'y', found '" + header.front() + "'",
                          line_no, 0);
    }
    if (header.size() < 2) {
        throw InvalidData("line " + std::to_string(line_no) + ": no feature columns", line_no, -1);
    }
    const std::size_t width = header.size();

    std::vector<double> values;
    long rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != width) {
            throw InvalidData("row " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width) + " columns, found " +
                                  std::to_string(cells.size()),
                              line_no, -1);
        }
        for (std::size_t j = 0; j < width; ++j) {
            const std::string where = "row " + std::to_string(line_no) + ", column " +
                                      std::to_string(j + 1) + " ('" + header[j] + "')";
            if (cells[j].empty()) throw InvalidData("missing value at " + where, line_no, long(j));
            const auto v = parse_number(cells[j]);
            if (!v) {
                throw InvalidData("malformed number '" + std::string(cells[j]) + "' at " + where,
                                  line_no, long(j));
            }
            if (!std::isfinite(*v)) {
                throw InvalidData("non-finite value at " + where, line_no, long(j));
            }
            values.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0) throw InvalidData("input has a header but no data rows", line_no, -1);

    Dataset data;
    const auto p = static_cast<Eigen::Index>(width - 1);
    data.X.resize(rows, p);
    data.y.resize(rows);
    for (long i = 0; i < rows; ++i) {
        data.y[i] = values[std::size_t(i) * width];
        for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = values[std::size_t(i) * width + 1 + j];
    }
    return data;
}

Dataset read_csv_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw InvalidData("cannot open input file " + path);
    return read_csv(file);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tuning-free ridge estimation for generalized linear models", "tridge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "tridge 0.1.0");

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit one estimator to a CSV dataset");
    fit_cmd->add_option("--input,-i", fit.input, "CSV file; header 'y,x1,...'")->required();
    fit_cmd->add_option("--family,-f", fit.family, "gaussian | poisson | bernoulli")->capture_default_str();
    fit_cmd->add_option("--estimator,-e", fit.estimator, "tridge | ridge:<r> | edr:<lambda> | cv:<K> | mle")
        ->capture_default_str();
    fit_cmd->add_option("--c", fit.c, "t-ridge grid half-width")->capture_default_str();
    fit_cmd->add_option("--m", fit.m, "t-ridge grid size")->capture_default_str();
    fit_cmd->add_option("--seed", fit.seed, "fold seed for cv:<K>")->capture_default_str();
    fit_cmd->add_option("--output,-o", fit.output, "output file (default stdout)");
    fit_cmd->add_option("--format", fit.format, "json | csv (coefficients only)")->capture_default_str();

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a replicated simulation cell");
    sim_cmd->add_option("--family,-f", sim.family)->capture_default_str();
    sim_cmd->add_option("--n", sim.n)->capture_default_str();
    sim_cmd->add_option("--p", sim.p)->capture_default_str();
    sim_cmd->add_option("--k", sim.k, "design correlation, one of 0, 0.2, 0.4")->capture_default_str();
    sim_cmd->add_option("--snr", sim.snr, "Gaussian signal-to-noise ratio")->capture_default_str();
    sim_cmd->add_option("--replications,-r", sim.replications)->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
    sim_cmd->add_option("--estimators", sim.estimators, "tridge, cv5, cv10, mle")
        ->delimiter(',')
        ->capture_default_str();
    sim_cmd->add_flag("--allow-any-k", sim.allow_any_k, "accept any 0 <= k < 1");
    sim_cmd->add_option("--output,-o", sim.output, "writes <output>.json and <output>.csv");
    sim_cmd->add_option("--format", sim.format, "stdout format: json | csv")->capture_default_str();

    ReproduceOptions rep;
    auto* rep_cmd = app.add_subcommand("reproduce", "Re-run a published table or the convergence figure");
    rep_cmd->add_option("id", rep.id, "2 | 3 | 4 | 5 | 6 | 7 | fig1")->required();
    rep_cmd->add_flag("--fast", rep.fast, "20 replications instead of 100");
    rep_cmd->add_option("--replications,-r", rep.replications, "explicit replication count");
    rep_cmd->add_option("--seed", rep.seed)->capture_default_str();
    rep_cmd->add_flag("--check", rep.check, "exit 4 if any cell misses its tolerance");
    rep_cmd->add_option("--output,-o", rep.output, "output file (default stdout)");
    rep_cmd->add_option("--format", rep.format, "csv | json")->capture_default_str();

    PathOptions path;
    auto* path_cmd = app.add_subcommand("path", "Dump the ridge path with its edr parameter");
    path_cmd->add_option("--input,-i", path.input)->required();
    path_cmd->add_option("--family,-f", path.family)->capture_default_str();
    path_cmd->add_option("--r-min", path.r_min)->capture_default_str();
    path_cmd->add_option("--r-max", path.r_max)->capture_default_str();
    path_cmd->add_option("--points", path.points, "log-spaced grid size")->capture_default_str();
    path_cmd->add_option("--grid", path.grid, "explicit increasing r values")->delimiter(',');
    path_cmd->add_option("--seed", path.seed, "unused; accepted for uniformity");
    path_cmd->add_option("--output,-o", path.output, "output file (default stdout)");
    path_cmd->add_option("--format", path.format, "csv | json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out);
        if (*sim_cmd) return cmd_simulate(sim, out, err);
        if (*rep_cmd) return cmd_reproduce(rep, out, err);
        if (*path_cmd) return cmd_path(path, out);
    } catch (const InvalidData& e) {
        describe_error(e, err);
        return kBadInput;
    } catch (const InvalidArgument& e) {
        describe_error(e, err);
        return kBadInput;
    } catch (const DimensionMismatch& e) {
        describe_error(e, err);
        return kBadInput;
    } catch (const Error& e) {
        describe_error(e, err);
        return kSolverFailure;
    } catch (const std::exception& e) {
        describe_error(e, err);
        return kInternal;
    }
    return kBadInput;
}

} // namespace tridge::app
