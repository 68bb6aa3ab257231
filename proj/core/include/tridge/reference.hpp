#pragma once

#include <string>
#include <vector>

#include "tridge/glm.hpp"

namespace tridge {

struct ReferenceValue {
    double mean;
    double sd;
};

/// One published cell of relative prediction errors.
struct ReferenceCell {
    std::string table;
    Family family;
    Eigen::Index n;
    Eigen::Index p;
    double k;
    ReferenceValue tridge;
    ReferenceValue cv5;
    ReferenceValue cv10;
};

/// All cells of a table id ("2" ... "7"); empty for unknown ids.
std::vector<ReferenceCell> reference_cells(const std::string& table);
std::vector<std::string> reference_table_ids();

/// Acceptance tolerances per family, read from the same data file.
struct FamilyTolerance {
    double tridge_abs = 0.0;
    /// Gaussian: |cv5 - published cv5| <= cv_abs.
    double cv_abs = 0.0;
    /// Bernoulli: tridge <= cv5 + cv_margin. Poisson: tridge < cv5.
    double cv_margin = 0.0;
};
FamilyTolerance reference_tolerance(Family family);

struct CellCheck {
    bool tridge_ok = false;
    bool cv_ok = false;
    bool pass() const { return tridge_ok && cv_ok; }
    std::string detail;
};

/// Compares reproduced means against a published cell.
CellCheck check_cell(const ReferenceCell& cell, double tridge_mean, double cv5_mean);

/// Shape requirements on the t-ridge vs MLE convergence curve.
struct ConvergenceCriterion {
    std::vector<Eigen::Index> n_grid;
    Eigen::Index p = 0;
    double k = 0.0;
    Family family = Family::gaussian;
    int max_inversions = 0;
    /// last / first must be strictly below this.
    double final_ratio_below = 0.0;
};
ConvergenceCriterion reference_convergence();

struct CurveCheck {
    int inversions = 0;
    double final_ratio = 0.0;
    bool pass = false;
    std::string detail;
};

/// Counts strict increases along `errors` and compares last to first.
CurveCheck check_curve(const ConvergenceCriterion& criterion, const std::vector<double>& errors);

/// The raw reference data file.
const char* reference_json();

} // namespace tridge
