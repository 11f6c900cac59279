#ifndef VARSHARE_PANEL_HPP
#define VARSHARE_PANEL_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "varshare/common.hpp"
#include "varshare/csv.hpp"

namespace varshare {

enum class ThresholdKind { hard, soft };

// One subject's observation matrix; rows are time points, columns are the
// d variables shared by every subject in the study.
struct SubjectPanel {
    std::string subject_id;
    std::vector<std::string> variables;
    Eigen::MatrixXd data;  // T_k x d

    int T() const { return static_cast<int>(data.rows()); }
    int d() const { return static_cast<int>(data.cols()); }
};

struct StudyConfig {
    int p = 1;
    bool center = true;
    double alpha_level = 0.05;
    ThresholdKind threshold = ThresholdKind::hard;
    std::uint64_t seed = 0;

    // per-equation lambda selection
    int n_lambda = 20;
    double lambda_ratio = 0.01;
    double c_node = 0.5;

    // fuse cross-validation grids (eta x c0 x cK) and holdout fraction
    int n_eta = 10;
    int n_c0 = 4;
    int n_ck = 3;
    double cv_holdout_frac = 0.2;

    // significance decisions additionally require a nonzero sparsified
    // common path (estimate-then-test filtering)
    bool significance_gate = true;
};

struct Study {
    std::vector<SubjectPanel> panels;
    StudyConfig config;

    int K() const { return static_cast<int>(panels.size()); }
    int d() const { return panels.empty() ? 0 : panels.front().d(); }
};

// Flat coefficient indexing inside one equation's dp-vector: lag-major, then
// variable, matching the (X'_{t-1} ... X'_{t-p}) design layout. All indices
// 0-based here.
inline int coef_index(int lag, int src, int d, int p) {
    if (lag < 0 || lag >= p || src < 0 || src >= d)
        throw ValidationError("coef_index: lag/source out of range");
    return lag * d + src;
}

inline std::pair<int, int> coef_lag_src(int j, int d, int p) {
    if (j < 0 || j >= d * p) throw ValidationError("coef_lag_src: index out of range");
    return {j / d, j % d};
}

// Global index within the stacked q = d^2 p path vector: equation-major.
inline int path_index(int target, int j, int dp) { return target * dp + j; }
inline std::pair<int, int> path_target_coef(int g, int dp) { return {g / dp, g % dp}; }

struct RegressionView {
    Eigen::VectorXd y;  // N_k
    Eigen::MatrixXd x;  // N_k x dp
};

// Column means subtracted per subject; the model has no intercept.
inline Eigen::MatrixXd center_columns(const Eigen::MatrixXd& data) {
    Eigen::MatrixXd out = data;
    out.rowwise() -= data.colwise().mean();
    return out;
}

// Lagged design shared by the d equations of one subject: row r holds
// (X'_{t-1}, ..., X'_{t-p}) for response time t = p + r.
inline Eigen::MatrixXd lag_design(const Eigen::MatrixXd& data, int p) {
    const int T = static_cast<int>(data.rows());
    const int d = static_cast<int>(data.cols());
    if (p < 1) throw ValidationError("lag order p must be >= 1");
    if (T <= p) throw ValidationError("panel too short for lag order");
    const int N = T - p;
    Eigen::MatrixXd x(N, d * p);
    for (int lag = 0; lag < p; ++lag)
        x.middleCols(lag * d, d) = data.middleRows(p - 1 - lag, N);
    return x;
}

inline Eigen::MatrixXd lag_responses(const Eigen::MatrixXd& data, int p) {
    const int T = static_cast<int>(data.rows());
    if (T <= p) throw ValidationError("panel too short for lag order");
    return data.bottomRows(T - p);
}

inline RegressionView build_regression_view(const SubjectPanel& panel, int i, int p,
                                            bool center = false) {
    if (i < 0 || i >= panel.d()) throw ValidationError("variable index out of range");
    Eigen::MatrixXd data = center ? center_columns(panel.data) : panel.data;
    RegressionView view;
    view.x = lag_design(data, p);
    view.y = lag_responses(data, p).col(i);
    return view;
}

namespace detail {

inline void validate_panel(const SubjectPanel& panel, int p, int expected_d,
                           const std::vector<std::string>* expected_vars) {
    if (expected_d > 0 && panel.d() != expected_d) {
        throw ValidationError("dimension mismatch (" + panel.subject_id +
                              ": d=" + std::to_string(panel.d()) + ", expected " +
                              std::to_string(expected_d) + ")");
    }
    if (expected_vars && panel.variables != *expected_vars) {
        throw ValidationError("variable ordering mismatch for subject " + panel.subject_id);
    }
    if (panel.T() <= p + 10) {
        throw ValidationError("subject " + panel.subject_id + " too short: T=" +
                              std::to_string(panel.T()) + " requires T > p+10=" +
                              std::to_string(p + 10));
    }
    if (!panel.data.allFinite()) {
        throw ValidationError("subject " + panel.subject_id + " contains non-finite values");
    }
}

}  // namespace detail

inline StudyConfig parse_study_config(const nlohmann::json& j) {
    StudyConfig cfg;
    cfg.p = j.value("p", 1);
    cfg.center = j.value("center", true);
    cfg.alpha_level = j.value("alpha", 0.05);
    std::string thr = j.value("threshold", "hard");
    if (thr == "hard")
        cfg.threshold = ThresholdKind::hard;
    else if (thr == "soft")
        cfg.threshold = ThresholdKind::soft;
    else
        throw ValidationError("threshold must be \"hard\" or \"soft\", got \"" + thr + "\"");
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.n_lambda = j.value("n_lambda", cfg.n_lambda);
    cfg.lambda_ratio = j.value("lambda_ratio", cfg.lambda_ratio);
    cfg.c_node = j.value("c_node", cfg.c_node);
    cfg.n_eta = j.value("n_eta", cfg.n_eta);
    cfg.n_c0 = j.value("n_c0", cfg.n_c0);
    cfg.n_ck = j.value("n_ck", cfg.n_ck);
    cfg.cv_holdout_frac = j.value("cv_holdout", cfg.cv_holdout_frac);
    cfg.significance_gate = j.value("significance_gate", cfg.significance_gate);
    if (cfg.p < 1) throw ValidationError("lag order p must be >= 1");
    if (cfg.alpha_level <= 0.0 || cfg.alpha_level >= 1.0)
        throw ValidationError("alpha must be in (0,1)");
    return cfg;
}

inline nlohmann::json study_config_to_json(const StudyConfig& cfg) {
    nlohmann::json j;
    j["p"] = cfg.p;
    j["center"] = cfg.center;
    j["alpha"] = cfg.alpha_level;
    j["threshold"] = cfg.threshold == ThresholdKind::hard ? "hard" : "soft";
    j["seed"] = cfg.seed;
    j["n_lambda"] = cfg.n_lambda;
    j["lambda_ratio"] = cfg.lambda_ratio;
    j["c_node"] = cfg.c_node;
    j["n_eta"] = cfg.n_eta;
    j["n_c0"] = cfg.n_c0;
    j["n_ck"] = cfg.n_ck;
    j["cv_holdout"] = cfg.cv_holdout_frac;
    j["significance_gate"] = cfg.significance_gate;
    return j;
}

// Manifest: {"subjects": [{"id": str, "path": str}, ...], "p": int,
// "center": bool, "alpha": float, ...}. CSV paths are resolved relative to
// the manifest location. Subjects are kept in listed order.
inline Study load_study(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ValidationError("cannot open manifest: " + manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest parse error: " + std::string(e.what()));
    }
    Study study;
    study.config = parse_study_config(j);
    if (!j.contains("subjects") || !j["subjects"].is_array() || j["subjects"].size() < 2)
        throw ValidationError("manifest must list at least 2 subjects");

    const auto base = std::filesystem::path(manifest_path).parent_path();
    for (const auto& s : j["subjects"]) {
        SubjectPanel panel;
        panel.subject_id = s.at("id").get<std::string>();
        std::filesystem::path csv_path = s.at("path").get<std::string>();
        if (csv_path.is_relative()) csv_path = base / csv_path;
        CsvTable table = read_csv(csv_path.string());
        panel.variables = table.header;
        panel.data = std::move(table.values);
        const int expected_d = study.panels.empty() ? -1 : study.d();
        detail::validate_panel(panel, study.config.p, expected_d,
                               study.panels.empty() ? nullptr : &study.panels.front().variables);
        study.panels.push_back(std::move(panel));
    }
    return study;
}

// Writes <id>.csv per subject plus manifest.json into dir.
inline std::string save_study(const Study& study, const std::string& dir,
                              const std::string& manifest_name = "manifest.json") {
    std::filesystem::create_directories(dir);
    nlohmann::json j = study_config_to_json(study.config);
    j["subjects"] = nlohmann::json::array();
    for (const auto& panel : study.panels) {
        std::string file = panel.subject_id + ".csv";
        write_csv((std::filesystem::path(dir) / file).string(), panel.variables, panel.data);
        j["subjects"].push_back({{"id", panel.subject_id}, {"path", file}});
    }
    auto manifest = (std::filesystem::path(dir) / manifest_name).string();
    std::ofstream out(manifest);
    out << j.dump(2) << '\n';
    if (!out) throw ValidationError("write failed: " + manifest);
    return manifest;
}

}  // namespace varshare

#endif  // VARSHARE_PANEL_HPP
