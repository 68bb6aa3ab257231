#include "tridge/reference.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tridge/error.hpp"
#include "tridge/report.hpp"

#include "reference_data.inc"

namespace tridge {

namespace {

const nlohmann::json& document() {
    static const nlohmann::json doc = nlohmann::json::parse(kReferenceJson);
    return doc;
}

Family family_of(const std::string& name) {
    const auto f = parse_family(name);
    if (!f) throw Error("reference data: unknown family " + name);
    return *f;
}

} // namespace

const char* reference_json() { return kReferenceJson; }

std::vector<std::string> reference_table_ids() {
    std::vector<std::string> ids;
    for (const auto& t : document().at("tables")) ids.push_back(t.at("id").get<std::string>());
    return ids;
}

std::vector<ReferenceCell> reference_cells(const std::string& table) {
    std::vector<ReferenceCell> out;
    for (const auto& t : document().at("tables")) {
        if (t.at("id").get<std::string>() != table) continue;
        for (const auto& c : t.at("cells")) {
            auto value = [&](const char* key) {
                return ReferenceValue{c.at(key).at("mean").get<double>(),
                                      c.at(key).at("sd").get<double>()};
            };
            out.push_back({table, family_of(c.at("family").get<std::string>()),
                           c.at("n").get<Eigen::Index>(), c.at("p").get<Eigen::Index>(),
                           c.at("k").get<double>(), value("tridge"), value("cv5"),
                           value("cv10")});
        }
    }
    return out;
}

FamilyTolerance reference_tolerance(Family family) {
    const auto& t = document().at("tolerances").at(std::string(to_string(family)));
    FamilyTolerance tol;
    tol.tridge_abs = t.at("tridge_abs").get<double>();
    tol.cv_abs = t.value("cv_abs", 0.0);
    tol.cv_margin = t.value("cv_margin", 0.0);
    return tol;
}

CellCheck check_cell(const ReferenceCell& cell, double tridge_mean, double cv5_mean) {
    const FamilyTolerance tol = reference_tolerance(cell.family);
    CellCheck check;
    std::ostringstream msg;
    check.tridge_ok = std::abs(tridge_mean - cell.tridge.mean) <= tol.tridge_abs;
    msg << "tridge " << format_double(tridge_mean) << " vs " << format_double(cell.tridge.mean)
        << " (+-" << format_double(tol.tridge_abs) << ")";
    switch (cell.family) {
    case Family::gaussian:
        check.cv_ok = std::abs(cv5_mean - cell.cv5.mean) <= tol.cv_abs;
        msg << "; cv5 " << format_double(cv5_mean) << " vs " << format_double(cell.cv5.mean)
            << " (+-" << format_double(tol.cv_abs) << ")";
        break;
    case Family::poisson:
        check.cv_ok = tridge_mean < cv5_mean;
        msg << "; tridge < cv5 (" << format_double(cv5_mean) << ")";
        break;
    case Family::bernoulli:
        check.cv_ok = tridge_mean <= cv5_mean + tol.cv_margin;
        msg << "; tridge <= cv5 + " << format_double(tol.cv_margin) << " ("
            << format_double(cv5_mean) << ")";
        break;
    }
    check.detail = msg.str();
    return check;
}

ConvergenceCriterion reference_convergence() {
    const auto& f = document().at("figure1");
    ConvergenceCriterion c;
    c.n_grid = f.at("n").get<std::vector<Eigen::Index>>();
    c.p = f.at("p").get<Eigen::Index>();
    c.k = f.at("k").get<double>();
    c.family = family_of(f.at("family").get<std::string>());
    c.max_inversions = f.at("max_inversions").get<int>();
    c.final_ratio_below = f.at("final_to_initial_ratio_below").get<double>();
    return c;
}

CurveCheck check_curve(const ConvergenceCriterion& criterion, const std::vector<double>& errors) {
    CurveCheck check;
    if (errors.size() < 2 || !(errors.front() > 0.0)) {
        check.detail = "curve needs at least two points and a positive first value";
        return check;
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i] > errors[i - 1]) ++check.inversions;
    }
    check.final_ratio = errors.back() / errors.front();
    check.pass = check.inversions <= criterion.max_inversions &&
                 check.final_ratio < criterion.final_ratio_below;
    std::ostringstream msg;
    msg << "inversions " << check.inversions << " (max " << criterion.max_inversions
        << "); final/initial " << format_double(check.final_ratio) << " (< "
        << format_double(criterion.final_ratio_below) << ")";
    check.detail = msg.str();
    return check;
}

} // namespace tridge
