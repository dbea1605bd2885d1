#include "axb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <set>

#include "axb/errors.hpp"
#include "axb/geometry.hpp"
#include "axb/plancherel.hpp"
#include "axb/qkl.hpp"

namespace axb {

using nlohmann::json;

// ---- fitting ------------------------------------------------------------

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("fit_power_law: x and y differ in length");
    if (x.size() < 3) throw DomainError("fit_power_law: need at least 3 samples");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_power_law: data must be positive");
        if (i > 0 && !(x[i] > x[i - 1])) throw DomainError("fit_power_law: x must increase");
    }
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double a = (sy - b * sx) / m;
    FitResult f;
    f.exponent = b;
    f.prefactor = std::exp(a);
    for (std::size_t i = 0; i < x.size(); ++i)
        f.residual = std::max(f.residual, std::abs(std::log(y[i]) - a - b * std::log(x[i])));
    return f;
}

// ---- names --------------------------------------------------------------

namespace {
const std::vector<std::pair<Campaign, std::string>>& campaign_names() {
    static const std::vector<std::pair<Campaign, std::string>> v{
        {Campaign::rho_crosscheck, "rho_crosscheck"},     {Campaign::qkl_audit, "qkl_audit"},
        {Campaign::heat_asymptotics, "heat_asymptotics"}, {Campaign::resolvent_scaling, "resolvent_scaling"},
        {Campaign::wave_l1, "wave_l1"},                   {Campaign::wave_uniform, "wave_uniform"},
        {Campaign::shell_lemmas, "shell_lemmas"}};
    return v;
}
}  // namespace

Campaign parse_campaign(const std::string& name) {
    for (const auto& [c, s] : campaign_names())
        if (s == name) return c;
    throw DomainError("unknown campaign '" + name + "'");
}

std::string to_string(Campaign c) {
    for (const auto& [k, s] : campaign_names())
        if (k == c) return s;
    return "?";
}

const std::vector<Campaign>& all_campaigns() {
    static const std::vector<Campaign> v = [] {
        std::vector<Campaign> out;
        for (const auto& p : campaign_names()) out.push_back(p.first);
        return out;
    }();
    return v;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::error: return "error";
        case Verdict::report: return "report";
    }
    return "?";
}

void CampaignConfig::validate() const {
    for (int n : n_list)
        if (n < 1 || n > 12) throw DomainError("campaign: n must be in 1..12");
    for (double t : t_list)
        if (!(t >= 0.0)) throw DomainError("campaign: t values must be >= 0");
    for (double g : gamma_list)
        if (!(g > 0.0)) throw DomainError("campaign: gamma values must be positive");
    if (alpha < 0.0) throw DomainError("campaign: alpha must be >= 0");
    if (format != "csv" && format != "json") throw DomainError("campaign: format must be csv or json");
    cfg.validate();
}

QuadratureConfig tolerance_preset(const std::string& name) {
    QuadratureConfig c;
    if (name == "strict") return c;
    if (name == "fast") {
        c.abs_tol = 1e-10;
        c.rel_tol = 1e-8;
        return c;
    }
    throw DomainError("unknown tolerance preset '" + name + "'");
}

// ---- report -------------------------------------------------------------

bool CampaignReport::all_pass() const {
    return std::none_of(cells.begin(), cells.end(),
                        [](const Cell& c) { return c.verdict == Verdict::fail || c.verdict == Verdict::error; });
}

bool CampaignReport::numeric_failure() const {
    return std::any_of(cells.begin(), cells.end(), [](const Cell& c) { return c.verdict == Verdict::error; });
}

int CampaignReport::exit_code() const {
    if (numeric_failure()) return 2;
    return all_pass() ? 0 : 3;
}

json CampaignReport::to_json() const {
    json j;
    j["campaign"] = campaign;
    j["params"] = params;
    j["cells"] = json::array();
    for (const auto& c : cells)
        j["cells"].push_back({{"label", c.label},
                              {"inputs", c.inputs},
                              {"outputs", c.outputs},
                              {"anchor", c.anchor},
                              {"verdict", to_string(c.verdict)}});
    j["summary"] = summary;
    return j;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_field(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    return s;
}

std::vector<std::string> scalar_keys(const std::vector<Cell>& cells, bool inputs) {
    std::vector<std::string> keys;
    std::set<std::string> seen;
    for (const auto& c : cells)
        for (auto it = (inputs ? c.inputs : c.outputs).begin(); it != (inputs ? c.inputs : c.outputs).end(); ++it)
            if (!it.value().is_array() && !it.value().is_object() && seen.insert(it.key()).second)
                keys.push_back(it.key());
    return keys;
}

}  // namespace

void write_report(const CampaignReport& report, const std::string& dir, const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path base = fs::path(dir) / report.campaign;
    if (format == "json") {
        std::ofstream(base.string() + ".json") << report.to_json().dump(2) << "\n";
    } else if (format == "csv") {
        std::ofstream out(base.string() + ".csv");
        auto in_keys = scalar_keys(report.cells, true), out_keys = scalar_keys(report.cells, false);
        out << "campaign,cell,label,anchor,verdict";
        for (const auto& k : in_keys) out << "," << k;
        for (const auto& k : out_keys) out << "," << k;
        out << "\n";
        for (std::size_t i = 0; i < report.cells.size(); ++i) {
            const Cell& c = report.cells[i];
            out << report.campaign << "," << i << "," << csv_field(c.label) << "," << c.anchor << ","
                << to_string(c.verdict);
            for (const auto& k : in_keys) out << "," << (c.inputs.contains(k) ? csv_field(c.inputs[k]) : "");
            for (const auto& k : out_keys) out << "," << (c.outputs.contains(k) ? csv_field(c.outputs[k]) : "");
            out << "\n";
        }
    } else {
        throw DomainError("write_report: format must be csv or json");
    }
    // series for plotting: cells that carry x / y arrays
    std::ofstream ser(base.string() + "_series.csv");
    ser << "campaign,cell,label,inputs,x,y\n";
    bool any = false;
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const json& o = report.cells[i].outputs;
        if (!o.contains("x") || !o.contains("y") || !o["x"].is_array()) continue;
        any = true;
        for (std::size_t j = 0; j < o["x"].size() && j < o["y"].size(); ++j)
            ser << report.campaign << "," << i << "," << csv_field(report.cells[i].label) << ","
                << csv_field(report.cells[i].inputs.dump()) << "," << format_number(o["x"][j].get<double>()) << "," << format_number(o["y"][j].get<double>()) << "\n";
    }
    std::ofstream py(base.string() + "_plot.py");
    py << "# log-log plot of " << report.campaign << "_series.csv; needs matplotlib\n"
       << "import csv, collections\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n"
       << "rows = collections.OrderedDict()\n"
       << "with open('" << report.campaign << "_series.csv') as f:\n"
       << "    for r in csv.DictReader(f):\n"
       << "        rows.setdefault(r['label'], []).append((float(r['x']), abs(float(r['y']))))\n"
       << "fig, ax = plt.subplots()\n"
       << "for label, pts in rows.items():\n"
       << "    ax.loglog([p[0] for p in pts], [p[1] for p in pts], 'o-', label=label)\n"
       << "ax.legend(fontsize='small')\n"
       << "fig.savefig('" << report.campaign << ".png', dpi=120)\n";
    if (!any) py << "# (no series in this campaign)\n";
}

// ---- campaigns ----------------------------------------------------------

namespace {

using CellFn = std::function<Cell()>;

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    return g;
}

Verdict check(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

// run cells concurrently, keep their order; a throwing cell becomes an error cell
std::vector<Cell> run_cells(std::vector<std::pair<Cell, CellFn>> jobs) {
    std::vector<std::future<Cell>> futs;
    futs.reserve(jobs.size());
    for (auto& [stub, fn] : jobs)
        futs.push_back(std::async(std::launch::async, [stub, fn]() {
            try {
                Cell c = fn();
                if (c.label.empty()) c.label = stub.label;
                if (c.anchor.empty()) c.anchor = stub.anchor;
                if (c.inputs.empty()) c.inputs = stub.inputs;
                return c;
            } catch (const std::exception& e) {
                Cell c = stub;
                c.verdict = Verdict::error;
                c.outputs["error"] = e.what();
                if (auto* ne = dynamic_cast<const NumericError*>(&e)) {
                    c.outputs["partial"] = ne->partial();
                    c.outputs["err_est"] = ne->error_estimate();
                }
                return c;
            }
        }));
    std::vector<Cell> out;
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

Cell stub(std::string label, std::string anchor, json inputs) {
    Cell c;
    c.label = std::move(label);
    c.anchor = std::move(anchor);
    c.inputs = std::move(inputs);
    return c;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> d) {
    return v.empty() ? d : v;
}

double psi_alpha(const CampaignConfig& c, int n) { return c.alpha > 0.0 ? c.alpha : n + 3.0; }

json kinds_json(const std::vector<WaveKind>& k) {
    json j = json::array();
    for (auto x : k) j.push_back(to_string(x));
    return j;
}

// -- rho_crosscheck

std::vector<std::pair<Cell, CellFn>> rho_jobs(const CampaignConfig& c, json& params) {
    auto ns = or_default(c.n_list, {1, 2, 3, 4, 5, 6});
    params["n"] = ns;
    std::vector<std::pair<Cell, CellFn>> jobs;
    const QuadratureConfig cfg = c.cfg;
    for (int n : ns) {
        Cell s1 = stub("closed vs c-function n=" + std::to_string(n), "plancherel.c_function",
                       {{"n", n}, {"u_lo", 1e-3}, {"u_hi", 1e4}, {"points", 50}});
        jobs.push_back({s1, [n, s1] {
                            Cell r = s1;
                            double worst = 0.0;
                            for (double u : log_grid(1e-3, 1e4, 50)) {
                                double a = rho_closed(n, u), b = rho_via_c(n, u);
                                worst = std::max(worst, std::abs(a - b) / a);
                            }
                            r.outputs = {{"max_rel_dev", worst}, {"tol", 1e-10}};
                            r.verdict = check(worst <= 1e-10);
                            return r;
                        }});
        Cell s2 = stub("kernel route n=" + std::to_string(n), "plancherel.kernel_integral",
                       {{"n", n}, {"u", {0.25, 0.5, 1.0, 2.0, 4.0, 9.0}}});
        jobs.push_back({s2, [n, s2, cfg] {
                            Cell r = s2;
                            const std::vector<double> us{0.25, 0.5, 1.0, 2.0, 4.0, 9.0};
                            if (n == 2) {
                                // the integral itself is -sqrt(u)
                                double worst = 0.0;
                                for (double u : us)
                                    worst = std::max(worst, std::abs(-rho_kernel_integral(2, u, cfg) - std::sqrt(u)) /
                                                                std::sqrt(u));
                                r.outputs = {{"max_rel_dev", worst}, {"tol", 1e-6}, {"mode", "raw integral"}};
                                r.verdict = check(worst <= 1e-6);
                            } else {
                                ScaleFit f = fit_kernel_scale(n, us, cfg);
                                r.outputs = {{"scale", f.scale}, {"max_rel_residual", f.max_rel_residual},
                                             {"tol", 1e-4}, {"mode", "one-scale fit"}};
                                r.verdict = check(f.max_rel_residual <= 1e-4);
                            }
                            return r;
                        }});
        Cell s3 = stub("asymptotics n=" + std::to_string(n), "plancherel.asymptotics",
                       {{"n", n}, {"u_large", 1e6}, {"u_small", 1e-8}});
        jobs.push_back({s3, [n, s3] {
                            Cell r = s3;
                            double big = rho_closed(n, 1e6) / std::pow(1e6, 0.5 * (n - 1));
                            double small = rho_closed(n, 1e-8) / std::sqrt(1e-8) / small_u_constant(n);
                            r.outputs = {{"large_ratio", big}, {"small_ratio", small}, {"K_n", small_u_constant(n)}};
                            r.verdict = check(std::abs(big - 1.0) < 1e-2 && std::abs(small - 1.0) < 1e-3);
                            return r;
                        }});
    }
    return jobs;
}

// -- qkl_audit

GaussianRational two_i_pow(int l) {
    GaussianRational v(1);
    for (int i = 0; i < l; ++i) v = v * GaussianRational(0, 2);
    return v;
}

std::vector<std::pair<Cell, CellFn>> qkl_jobs(const CampaignConfig&, json& params) {
    const int lmax = 8, lpar = 6;
    params["l_max"] = lmax;
    params["l_parity"] = lpar;
    std::vector<std::pair<Cell, CellFn>> jobs;
    for (int l = 0; l <= lmax; ++l) {
        Cell s = stub("l=" + std::to_string(l), "qkl.leading_limit", {{"l", l}});
        jobs.push_back({s, [l, s, lpar] {
                            Cell r = s;
                            const QklTable& t = qkl_table(l);
                            bool lead = t.a.at(l) == two_i_pow(l);
                            bool par = l > lpar || parity_holds(t);
                            bool rec = l == lmax || recursion_closes(t, qkl_table(l + 1));
                            auto lim = akl_limits(t);
                            bool lim_ok = lim.size() == t.a.size() && std::equal(lim.begin(), lim.end(), t.a.begin());
                            r.outputs = {{"a_ll", t.a.at(l).str()},
                                         {"a_ll_exact", lead},
                                         {"parity", l > lpar ? json("not checked") : json(par)},
                                         {"recursion_closes", l == lmax ? json("not checked") : json(rec)},
                                         {"limits_match", lim_ok},
                                         {"zero_P", t.zero_k.size()},
                                         {"tail_bound", std::isfinite(t.b_bound) ? json(t.b_bound) : json("inf")}};
                            r.verdict = check(lead && par && rec && lim_ok);
                            return r;
                        }});
    }
    return jobs;
}

// -- heat_asymptotics

std::vector<std::pair<Cell, CellFn>> heat_jobs(const CampaignConfig& c, json& params) {
    auto ns = or_default(c.n_list, {1, 2, 3});
    auto gs = or_default(c.gamma_list, {0.5, 1.0, 2.0});
    params["n"] = ns;
    params["gamma"] = gs;
    const QuadratureConfig cfg = c.cfg;
    std::vector<std::pair<Cell, CellFn>> jobs;
    for (int n : ns)
        for (double g : gs) {
            for (int large = 1; large >= 0; --large) {
                const double lo = large ? 1e2 : 1e-6, hi = large ? 1e4 : 1e-4;
                const double want = large ? -1.5 / g : -(n + 1) / (2.0 * g);
                Cell s = stub(std::string(large ? "large t" : "small t") + " n=" + std::to_string(n) +
                                  " gamma=" + format_number(g),
                              large ? "heat.large_t_exponent" : "heat.small_t_exponent",
                              {{"n", n}, {"gamma", g}, {"t_lo", lo}, {"t_hi", hi}, {"points", 5}});
                jobs.push_back({s, [=] {
                                    Cell r = s;
                                    auto ts = log_grid(lo, hi, 5);
                                    std::vector<double> ys;
                                    for (double t : ts) ys.push_back(heat_uniform_norm(n, g, t, cfg));
                                    FitResult f = fit_power_law(ts, ys);
                                    r.outputs = {{"exponent", f.exponent}, {"target", want}, {"tol", 0.05},
                                                 {"prefactor", f.prefactor}, {"fit_residual", f.residual},
                                                 {"x", ts}, {"y", ys}};
                                    if (n == 2 && g == 1.0) r.outputs["branch"] = "closed form";
                                    r.verdict = check(std::abs(f.exponent - want) <= 0.05);
                                    return r;
                                }});
            }
            if (n == 2 && g == 1.0) {
                Cell s = stub("closed form n=2 gamma=1", "heat.closed_form",
                              {{"n", 2}, {"gamma", 1.0}, {"t_lo", 1e-3}, {"t_hi", 1e3}, {"points", 25}});
                jobs.push_back({s, [s, cfg] {
                                    Cell r = s;
                                    double worst = 0.0;
                                    for (double t : log_grid(1e-3, 1e3, 25)) {
                                        double w = 0.5 * std::sqrt(std::numbers::pi) * std::pow(t, -1.5);
                                        worst = std::max(worst, std::abs(heat_uniform_norm(2, 1.0, t, cfg) - w) / w);
                                    }
                                    r.outputs = {{"max_rel_dev", worst}, {"tol", 1e-10}, {"branch", "closed form"}};
                                    r.verdict = check(worst <= 1e-10);
                                    return r;
                                }});
            }
        }
    return jobs;
}

// -- resolvent_scaling

std::vector<std::pair<Cell, CellFn>> resolvent_jobs(const CampaignConfig& c, json& params) {
    auto ns = or_default(c.n_list, {1});
    auto bs = or_default(c.b_list, {1e-4, 1e-3, 1e-2, 1e-1});
    auto xs = or_default(c.x_list, {10.0, 31.622776601683793, 100.0, 316.22776601683796, 1000.0});
    std::sort(bs.begin(), bs.end());
    std::sort(xs.begin(), xs.end());
    const cplx s = c.s;
    const double a = c.a;
    params["n"] = ns;
    params["s_re"] = s.real();
    params["s_im"] = s.imag();
    params["a"] = a;
    params["b"] = bs;
    params["x"] = xs;
    const QuadratureConfig cfg = c.cfg;
    std::vector<std::pair<Cell, CellFn>> jobs;
    for (int n : ns) {
        Cell sb = stub("b -> 0 n=" + std::to_string(n), "resolvent.small_b_exponent",
                       {{"n", n}, {"s_re", s.real()}, {"a", a}});
        jobs.push_back({sb, [=] {
                            Cell r = sb;
                            std::vector<double> ys;
                            for (double b : bs) ys.push_back(resolvent_norm_bound(n, cplx(a, b), s, cfg));
                            FitResult f = fit_power_law(bs, ys);
                            double want = 1.0 - s.real();
                            r.outputs = {{"exponent", f.exponent}, {"target", want}, {"tol", 0.05},
                                         {"fit_residual", f.residual}, {"x", bs}, {"y", ys}};
                            r.verdict = check(std::abs(f.exponent - want) <= 0.05);
                            return r;
                        }});
        Cell sx = stub("z = -x n=" + std::to_string(n), "resolvent.large_z_exponent",
                       {{"n", n}, {"s_re", s.real()}});
        jobs.push_back({sx, [=] {
                            Cell r = sx;
                            std::vector<double> ys;
                            for (double x : xs) ys.push_back(resolvent_norm_bound(n, cplx(-x, 0.0), s, cfg));
                            FitResult f = fit_power_law(xs, ys);
                            double want = 0.5 * (n + 1) - s.real();
                            r.outputs = {{"exponent", f.exponent}, {"target", want}, {"tol", 0.05},
                                         {"fit_residual", f.residual}, {"x", xs}, {"y", ys}};
                            r.verdict = check(std::abs(f.exponent - want) <= 0.05);
                            return r;
                        }});
        const double s_bad = 0.5 * (n + 1) - 0.01;
        Cell sd = stub("divergence n=" + std::to_string(n), "resolvent.convergence_threshold",
                       {{"n", n}, {"s_re", s_bad}});
        jobs.push_back({sd, [=] {
                            Cell r = sd;
                            try {
                                double v = resolvent_norm_bound(n, cplx(-1.0, 0.0), s_bad, cfg);
                                r.outputs = {{"raised", false}, {"value", v}};
                                r.verdict = Verdict::fail;
                            } catch (const DivergenceError& e) {
                                r.outputs = {{"raised", true}, {"message", e.what()}};
                                r.verdict = Verdict::pass;
                            }
                            return r;
                        }});
    }
    return jobs;
}

// -- wave campaigns

double wave_xi_max(int n, double t_max, double R_max, const QuadratureConfig& cfg) {
    return t_max + R_max + 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + 5.0) + 5.0;
}

std::vector<std::pair<Cell, CellFn>> wave_l1_jobs(const CampaignConfig& c, json& params) {
    auto ns = or_default(c.n_list, {1});
    auto kinds = or_default(c.kinds, {WaveKind::cos, WaveKind::sinc});
    auto ts = or_default(c.t_list, {10.0, 20.0, 40.0, 80.0});
    std::sort(ts.begin(), ts.end());
    const double margin = 20.0;
    params["n"] = ns;
    params["kinds"] = kinds_json(kinds);
    params["t"] = ts;
    params["R_margin"] = margin;
    const QuadratureConfig cfg = c.cfg;
    std::vector<std::pair<Cell, CellFn>> jobs;
    for (int n : ns)
        for (WaveKind kind : kinds) {
            const double alpha = psi_alpha(c, n);
            Cell s = stub("L1 " + to_string(kind) + " n=" + std::to_string(n), "wave.l1_growth",
                          {{"n", n}, {"kind", to_string(kind)}, {"alpha", alpha}});
            jobs.push_back({s, [=] {
                                Cell r = s;
                                auto psi = PsiDescriptor::rational_decay(alpha);
                                const double Rmax = ts.back() + margin;
                                WaveKernel wk(kind, psi, n, wave_xi_max(n, ts.back(), Rmax, cfg), cfg);
                                ShellWeight w(n, Rmax + 1.0, cfg);
                                std::vector<double> ys, balls;
                                for (double t : ts) {
                                    L1Result l1 = wave_l1_norm(wk, t, t + margin, cfg, &w);
                                    ys.push_back(l1.value);
                                    balls.push_back(l1.ball_bound);
                                }
                                FitResult f = fit_power_law(ts, ys);
                                r.outputs = {{"exponent", f.exponent}, {"target", 1.0}, {"tol", 0.1},
                                             {"prefactor", f.prefactor}, {"fit_residual", f.residual},
                                             {"ball_bound", balls.front()}, {"x", ts}, {"y", ys}};
                                r.verdict = check(std::abs(f.exponent - 1.0) <= 0.1);
                                return r;
                            }});
            Cell s0 = stub("L1 at t=0 " + to_string(kind) + " n=" + std::to_string(n), "wave.l1_at_zero",
                           {{"n", n}, {"kind", to_string(kind)}, {"alpha", alpha}, {"t", 0.0}});
            jobs.push_back({s0, [=] {
                                Cell r = s0;
                                L1Result l1 = wave_l1_norm(kind, PsiDescriptor::rational_decay(alpha), n, 0.0,
                                                           margin, cfg);
                                r.outputs = {{"l1_shells", l1.value}, {"ball_bound", l1.ball_bound},
                                             {"upper", l1.value + l1.ball_bound}};
                                r.verdict = check(std::isfinite(l1.value) && std::isfinite(l1.ball_bound));
                                return r;
                            }});
        }
    return jobs;
}

std::vector<std::pair<Cell, CellFn>> wave_uniform_jobs(const CampaignConfig& c, json& params) {
    auto ns = or_default(c.n_list, {1, 2});
    auto kinds = or_default(c.kinds, {WaveKind::exp, WaveKind::cos, WaveKind::sinc});
    auto ts = or_default(c.t_list, {10.0, 20.0, 40.0, 80.0});
    std::sort(ts.begin(), ts.end());
    params["n"] = ns;
    params["kinds"] = kinds_json(kinds);
    params["t"] = ts;
    const QuadratureConfig cfg = c.cfg;
    std::vector<std::pair<Cell, CellFn>> jobs;
    for (int n : ns)
        for (WaveKind kind : kinds) {
            const double alpha = psi_alpha(c, n);
            Cell s = stub("uniform " + to_string(kind) + " n=" + std::to_string(n), "wave.uniform_lower_bound",
                          {{"n", n}, {"kind", to_string(kind)}, {"alpha", alpha}});
            jobs.push_back({s, [=] {
                                Cell r = s;
                                auto psi = PsiDescriptor::rational_decay(alpha);
                                WaveKernel wk(kind, psi, n, wave_xi_max(n, ts.back(), ts.back() + 15.0, cfg), cfg);
                                PlateauResult p = plateau_scan(wk);
                                // k_t(-R, 0) is the scaled radial factor itself
                                std::vector<double> peak, i1;
                                for (double t : ts) {
                                    double best = -1.0, best_i1 = 0.0;
                                    for (double xi = p.alpha; xi <= p.beta + 1e-12; xi += 0.02) {
                                        WaveParts w = wk.radial_scaled(t, std::max(t - xi, 0.0));
                                        if (std::abs(w.total) > best) {
                                            best = std::abs(w.total);
                                            best_i1 = std::abs(w.i1);
                                        }
                                    }
                                    peak.push_back(best);
                                    i1.push_back(best_i1);
                                }
                                double mx = *std::max_element(peak.begin(), peak.end());
                                double mn = *std::min_element(peak.begin(), peak.end());
                                bool ok = mn > 0.0 && mx / mn <= 4.0 && mn >= 0.25 * peak.front();
                                r.outputs = {{"alpha_plateau", p.alpha}, {"beta_plateau", p.beta},
                                             {"A_re", p.A.real()},  {"A_im", p.A.imag()},
                                             {"max_over_min", mn > 0.0 ? mx / mn : INFINITY},
                                             {"min_over_first", peak.front() > 0.0 ? mn / peak.front() : 0.0},
                                             {"x", ts}, {"y", peak}, {"i1_at_peak", i1}};
                                r.verdict = check(ok);
                                return r;
                            }});
            if (kind == WaveKind::sinc) {
                Cell s1 = stub("sinc I1 decay n=" + std::to_string(n), "wave.sinc_i1_decay",
                               {{"n", n}, {"kind", "sinc"}, {"alpha", alpha}});
                jobs.push_back({s1, [=] {
                                    Cell r = s1;
                                    auto psi = PsiDescriptor::rational_decay(alpha);
                                    WaveKernel wk(kind, psi, n, wave_xi_max(n, ts.back(), ts.back() + 15.0, cfg),
                                                  cfg);
                                    PlateauResult p = plateau_scan(wk);
                                    const double xi = 0.5 * (p.alpha + p.beta);
                                    std::vector<double> ys;
                                    for (double t : ts) ys.push_back(std::abs(wk.radial_scaled(t, t - xi).i1));
                                    r.outputs = {{"xi", xi}, {"target", -1.0}, {"tol", 0.3}, {"x", ts}, {"y", ys}};
                                    if (std::any_of(ys.begin(), ys.end(), [](double v) { return !(v > 0.0); })) {
                                        r.outputs["note"] = "I1 vanished at some t";
                                        r.verdict = Verdict::fail;
                                        return r;
                                    }
                                    FitResult f = fit_power_law(ts, ys);
                                    r.outputs["exponent"] = f.exponent;
                                    r.outputs["fit_residual"] = f.residual;
                                    r.verdict = check(std::abs(f.exponent + 1.0) <= 0.3);
                                    return r;
                                }});
            }
        }
    return jobs;
}

// -- shell_lemmas

std::vector<std::pair<Cell, CellFn>> shell_jobs(const CampaignConfig& c, json& params) {
    auto ns = or_default(c.n_list, {1, 2, 3});
    auto ts = or_default(c.t_list, {20.0, 40.0, 80.0, 160.0});
    std::sort(ts.begin(), ts.end());
    const double a = -2.0, b = 2.0;
    params["n"] = ns;
    params["t"] = ts;
    params["a"] = a;
    params["b"] = b;
    const QuadratureConfig cfg = c.cfg;
    std::vector<std::pair<Cell, CellFn>> jobs;
    for (int n : ns)
        for (double m : {2.0, 0.0}) {
            Cell s = stub("J n=" + std::to_string(n) + " m=" + format_number(m),
                          m > 0 ? "shell.decay" : "shell.growth", {{"n", n}, {"m", m}, {"a", a}, {"b", b}});
            jobs.push_back({s, [=] {
                                Cell r = s;
                                std::vector<double> js, ratios;
                                for (double t : ts) {
                                    ShellSpec sp{t, a, b, m};
                                    double J = shell_integral(sp, n, cfg);
                                    js.push_back(J);
                                    ratios.push_back(J / std::pow(t, 1.0 - m));
                                }
                                double mx = *std::max_element(ratios.begin(), ratios.end());
                                double mn = *std::min_element(ratios.begin(), ratios.end());
                                double drift = (mx - mn) / mx;
                                r.outputs = {{"drift", drift}, {"tol", 0.25}, {"ratio_min", mn}, {"ratio_max", mx},
                                             {"x", ts}, {"y", js}};
                                r.verdict = check(mn > 0.0 && drift < 0.25);
                                return r;
                            }});
        }
    // the I1 part integrated over a shell, exp kernel
    std::vector<double> t3;
    for (double t : ts)
        if (t <= 80.0) t3.push_back(t);
    for (int n : ns) {
        if (n > 2 || t3.size() < 3) continue;
        const double alpha = psi_alpha(c, n);
        Cell s = stub("I1 shell n=" + std::to_string(n), "shell.i1_bound",
                      {{"n", n}, {"kind", "exp"}, {"alpha", alpha}, {"a", -5.0}, {"b", 5.0}});
        jobs.push_back({s, [=] {
                            Cell r = s;
                            auto psi = PsiDescriptor::rational_decay(alpha);
                            WaveKernel wk(WaveKind::exp, psi, n, wave_xi_max(n, t3.back(), t3.back() + 5.0, cfg), cfg);
                            ShellWeight w(n, t3.back() + 6.0, cfg);
                            std::vector<double> ys;
                            for (double t : t3) ys.push_back(shell_part_integral(wk, t, -5.0, 5.0, 1, w, cfg));
                            FitResult f = fit_power_law(t3, ys);
                            r.outputs = {{"exponent", f.exponent}, {"target", -1.0}, {"tol", 0.15},
                                         {"x", t3}, {"y", ys}};
                            r.verdict = check(std::abs(f.exponent + 1.0) <= 0.15);
                            return r;
                        }});
    }
    return jobs;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& config) {
    config.validate();
    CampaignReport rep;
    rep.campaign = to_string(config.campaign);
    rep.params["seed"] = config.seed;
    rep.params["abs_tol"] = config.cfg.abs_tol;
    rep.params["rel_tol"] = config.cfg.rel_tol;
    if (config.campaign == Campaign::wave_l1 || config.campaign == Campaign::wave_uniform ||
        config.campaign == Campaign::shell_lemmas)
        rep.params["alpha"] = config.alpha > 0.0 ? json(config.alpha) : json("n + 3");
    std::vector<std::pair<Cell, CellFn>> jobs;
    switch (config.campaign) {
        case Campaign::rho_crosscheck: jobs = rho_jobs(config, rep.params); break;
        case Campaign::qkl_audit: jobs = qkl_jobs(config, rep.params); break;
        case Campaign::heat_asymptotics: jobs = heat_jobs(config, rep.params); break;
        case Campaign::resolvent_scaling: jobs = resolvent_jobs(config, rep.params); break;
        case Campaign::wave_l1: jobs = wave_l1_jobs(config, rep.params); break;
        case Campaign::wave_uniform: jobs = wave_uniform_jobs(config, rep.params); break;
        case Campaign::shell_lemmas: jobs = shell_jobs(config, rep.params); break;
    }
    auto t0 = std::chrono::steady_clock::now();
    rep.cells = run_cells(std::move(jobs));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"error", 0}, {"report", 0}};
    for (const auto& c : rep.cells) ++counts[to_string(c.verdict)];
    rep.summary = {{"cells", rep.cells.size()}, {"pass", counts["pass"]}, {"fail", counts["fail"]},
                   {"error", counts["error"]}, {"report", counts["report"]}, {"all_pass", rep.all_pass()}};
    rep.seconds = secs;
    if (!config.out_dir.empty()) write_report(rep, config.out_dir, config.format);
    return rep;
}

}  // namespace axb
