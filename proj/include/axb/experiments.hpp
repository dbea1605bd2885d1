#pragma once

#include <string>
#include <vector>

#include "axb/kernel.hpp"
#include "axb/quadrature.hpp"
#include "json.hpp"

namespace axb {

struct FitResult {
    double exponent = 0.0, prefactor = 0.0;
    double residual = 0.0;  // max |log y - fit| over the samples
};

// least squares in (log x, log y); needs >= 3 points, x increasing, all positive
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

enum class Campaign { rho_crosscheck, qkl_audit, heat_asymptotics, resolvent_scaling, wave_l1, wave_uniform, shell_lemmas };
Campaign parse_campaign(const std::string& name);
std::string to_string(Campaign c);
const std::vector<Campaign>& all_campaigns();

enum class Verdict { pass, fail, error, report };
std::string to_string(Verdict v);

// Empty lists mean "campaign default".
struct CampaignConfig {
    Campaign campaign = Campaign::rho_crosscheck;
    std::vector<int> n_list;
    std::vector<double> t_list, gamma_list;
    std::vector<WaveKind> kinds;
    double alpha = 0.0;  // psi = (1 + s^2)^{-alpha}; 0 means n + 3
    cplx s = 2.0;
    double a = 1.0;
    std::vector<double> b_list, x_list;
    QuadratureConfig cfg;
    unsigned seed = 12345;
    std::string out_dir;  // empty: no files
    std::string format = "csv";

    void validate() const;
};

QuadratureConfig tolerance_preset(const std::string& name);  // fast | strict

struct Cell {
    std::string label;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::string anchor;
    Verdict verdict = Verdict::report;
};

struct CampaignReport {
    std::string campaign;
    nlohmann::json params = nlohmann::json::object();
    std::vector<Cell> cells;
    nlohmann::json summary = nlohmann::json::object();
    double seconds = 0.0;  // wall time, kept out of the written report

    bool all_pass() const;
    bool numeric_failure() const;
    int exit_code() const;  // 0 pass, 2 numeric failure, 3 verdict failure
    nlohmann::json to_json() const;
};

CampaignReport run_campaign(const CampaignConfig& config);

// <campaign>.csv or .json, <campaign>_series.csv and <campaign>_plot.py under dir
void write_report(const CampaignReport& report, const std::string& dir, const std::string& format);
std::string format_number(double v);  // 17 significant digits

}  // namespace axb
