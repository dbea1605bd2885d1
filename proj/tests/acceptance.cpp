// One PASS/FAIL line per acceptance criterion.  Exit status is 0 once every
// criterion has been evaluated; --strict turns any FAIL into exit status 1.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "axb/errors.hpp"
#include "axb/experiments.hpp"
#include "axb/geometry.hpp"
#include "axb/kernel.hpp"

using namespace axb;

namespace {

struct Line {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char b[160];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

// cells whose anchor starts with prefix
bool cells_pass(const CampaignReport& r, const std::string& prefix, std::string& detail) {
    bool ok = true;
    int count = 0;
    for (const auto& c : r.cells) {
        if (c.anchor.rfind(prefix, 0) != 0) continue;
        ++count;
        if (c.verdict != Verdict::pass) {
            ok = false;
            detail += " [" + to_string(c.verdict) + ": " + c.label;
            if (c.outputs.contains("exponent"))
                detail += fmt(", exponent %.4f", c.outputs["exponent"].get<double>());
            if (c.outputs.contains("error")) detail += ", " + c.outputs["error"].get<std::string>();
            detail += "]";
        }
    }
    return ok && count > 0;
}

CampaignReport campaign(Campaign c, std::vector<int> n = {}) {
    CampaignConfig cc;
    cc.campaign = c;
    cc.n_list = std::move(n);
    return run_campaign(cc);
}

Line ac1(CampaignReport& rho) {
    auto t0 = std::chrono::steady_clock::now();
    rho = campaign(Campaign::rho_crosscheck);
    double s = seconds_since(t0);
    Line l;
    std::string d;
    bool ok = cells_pass(rho, "plancherel.c_function", d) & cells_pass(rho, "plancherel.kernel_integral", d);
    l.pass = ok && s < 60.0;
    l.detail = "closed/c-function/kernel routes, n=1..6, " + fmt("%.1f s", s) + d;
    return l;
}

Line ac2(const CampaignReport& rho) {
    Line l;
    std::string d;
    l.pass = cells_pass(rho, "plancherel.asymptotics", d);
    l.detail = "large and small u limits, n=1..6" + d;
    return l;
}

Line simple(Campaign c, const std::vector<std::string>& prefixes, double limit, const std::string& what,
            std::vector<int> n = {}) {
    auto t0 = std::chrono::steady_clock::now();
    CampaignReport r = campaign(c, std::move(n));
    double s = seconds_since(t0);
    Line l;
    std::string d;
    bool ok = true;
    for (const auto& p : prefixes) ok = cells_pass(r, p, d) && ok;
    l.pass = ok && s < limit;
    l.detail = what + ", " + fmt("%.1f s", s) + (s < limit ? "" : fmt(" (limit %.0f s)", limit)) + d;
    return l;
}

Line ac8() {
    CampaignReport r = campaign(Campaign::wave_uniform);
    Line l;
    std::string d;
    bool flat = cells_pass(r, "wave.uniform_lower_bound", d);
    bool sinc = cells_pass(r, "wave.sinc_i1_decay", d);
    l.pass = flat && sinc;
    double worst = 0.0;
    for (const auto& c : r.cells)
        if (c.anchor == "wave.uniform_lower_bound" && c.outputs.contains("max_over_min"))
            worst = std::max(worst, c.outputs["max_over_min"].get<double>());
    l.detail = std::string("peak |k_t| on the plateau shell ") + (flat ? "flat" : "not flat") +
               fmt(" (worst max/min %.4f)", worst) + ", sinc I1 decay " + (sinc ? "ok" : "off target") + d;
    return l;
}

GroupPoint random_point(std::mt19937& rng, int n, double rlo, double rhi) {
    std::uniform_real_distribution<double> ux(-1.0, 1.0), ur(0.0, 3.5), ug(-1.0, 1.0);
    for (;;) {
        GroupPoint p{ux(rng), std::vector<double>(n)};
        double norm = 0.0;
        for (double& v : p.y) {
            v = ug(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-3) continue;
        double r = ur(rng);
        for (double& v : p.y) v *= r / norm;
        double R = distance(p);
        if (R >= rlo && R <= rhi) return p;
    }
}

Line ac9() {
    std::mt19937 rng(20240601);
    Line l{true, ""};
    for (int n : {1, 2}) {
        std::vector<GroupPoint> grid{GroupPoint::identity(n)};
        while (grid.size() < 20) grid.push_back(random_point(rng, n, 0.0, 4.0));
        auto rep = max_at_identity_check(SpectralFunction::heat(1.0, 1.0), n, grid);
        l.pass = l.pass && rep.pass;
        double mx = 0.0;
        for (std::size_t i = 1; i < rep.values.size(); ++i) mx = std::max(mx, rep.values[i]);
        l.detail += "n=" + std::to_string(n) + fmt(": max off identity / value at identity %.4f", mx / rep.value_e) +
                    (rep.pass ? "; " : " (offenders); ");
    }
    return l;
}

Line ac10() {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ut(1.0, 5.0);
    const WaveKind kinds[3] = {WaveKind::exp, WaveKind::cos, WaveKind::sinc};
    double worst = 0.0;
    for (int n : {1, 2}) {
        auto psi = PsiDescriptor::rational_decay(n + 3.0);
        for (int i = 0; i < 10; ++i) {
            GroupPoint p = random_point(rng, n, 1.0, 4.0);
            double t = ut(rng);
            WaveKind k = kinds[i % 3];
            cplx a = wave_kernel(k, psi, n, t, p), b = wave_kernel_direct(k, psi, n, t, p);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
    }
    return {worst <= 1e-4, fmt("10 random points for each n in {1, 2}, worst relative difference %.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    auto t0 = std::chrono::steady_clock::now();
    CampaignReport rho;
    std::vector<std::pair<std::string, std::function<Line()>>> checks{
        {"density routes agree", [&] { return ac1(rho); }},
        {"density asymptotics", [&] { return ac2(rho); }},
        {"symbolic q_{k,l} audit",
         [] { return simple(Campaign::qkl_audit, {"qkl."}, 10.0, "a_{l,l}, parity, recursion for l <= 8"); }},
        {"heat norm laws",
         [] {
             return simple(Campaign::heat_asymptotics, {"heat."}, 120.0,
                           "n in {1,2,3} x gamma in {0.5,1,2}, large and small t exponents");
         }},
        {"resolvent scaling",
         [] { return simple(Campaign::resolvent_scaling, {"resolvent."}, 600.0, "b -> 0, z = -x, divergence"); }},
        {"shell integrals",
         [] { return simple(Campaign::shell_lemmas, {"shell.decay", "shell.growth"}, 600.0, "n in {1,2,3}"); }},
        {"wave L1 growth",
         [] { return simple(Campaign::wave_l1, {"wave.l1_growth"}, 600.0, "n=1, cos and sinc, t=10..80"); }},
        {"wave uniform norm", [] { return ac8(); }},
        {"uniform norm at the identity", [] { return ac9(); }},
        {"kernel routes agree", [] { return ac10(); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        Line l;
        try {
            l = checks[i].second();
        } catch (const std::exception& e) {
            l = {false, std::string("exception: ") + e.what()};
        }
        if (!l.pass) ++failed;
        std::printf("[%2zu] %s  %s: %s\n", i + 1, l.pass ? "PASS" : "FAIL", checks[i].first.c_str(), l.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass (%.1f s)\n", int(checks.size()) - failed, checks.size(), seconds_since(t0));
    return strict && failed ? 1 : 0;
}
