// axb: evaluations and verification campaigns from the command line.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "axb/errors.hpp"
#include "axb/experiments.hpp"
#include "axb/geometry.hpp"
#include "axb/kernel.hpp"
#include "axb/plancherel.hpp"
#include "axb/qkl.hpp"

using namespace axb;

namespace {

std::string num(double v) { return format_number(v); }

void row(const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) std::cout << (i ? "," : "") << f[i];
    std::cout << "\n";
}

struct CampaignFlags {
    std::vector<int> n;
    std::vector<double> t, gamma;
    std::vector<std::string> kinds;
    double alpha = 0.0;
    unsigned seed = 12345;
    std::string out, format = "csv", preset = "strict";
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernels, norms and asymptotic checks for functions of Laplacians on ax+b groups"};
    app.require_subcommand(1);
    std::string preset = "strict";
    app.add_option("--tol-preset", preset, "fast or strict")->check(CLI::IsMember({"fast", "strict"}));

    // rho
    int rn = 1;
    std::vector<double> ru{1.0};
    std::string route = "closed";
    auto* rho_cmd = app.add_subcommand("rho", "Plancherel density; CSV: n,u,route,rho");
    rho_cmd->add_option("--n", rn)->required();
    rho_cmd->add_option("--u", ru, "spectral points")->expected(1, -1);
    rho_cmd->add_option("--route", route)->check(CLI::IsMember({"closed", "cfun", "kernel"}));

    // qkl
    int ql = 2;
    auto* qkl_cmd = app.add_subcommand("qkl", "q_{k,l} table; CSV: l,k,a_re,a_im,P");
    qkl_cmd->add_option("--l", ql)->required()->check(CLI::Range(0, 12));

    // kernel
    int kn = 1;
    double kg = 1.0, kt = 1.0;
    std::vector<double> kR{0.0, 0.5, 1.0, 2.0};
    auto* kernel_cmd = app.add_subcommand("kernel", "heat kernel of the shifted Laplacian by radius; CSV: n,gamma,t,R,value");
    kernel_cmd->add_option("--n", kn)->required();
    kernel_cmd->add_option("--gamma", kg);
    kernel_cmd->add_option("--t", kt);
    kernel_cmd->add_option("--R", kR)->expected(1, -1);

    // heat
    int hn = 1;
    double hg = 1.0;
    std::vector<double> ht{1.0};
    auto* heat_cmd = app.add_subcommand("heat", "uniform norm of exp(-t L^gamma); CSV: n,gamma,t,norm");
    heat_cmd->add_option("--n", hn)->required();
    heat_cmd->add_option("--gamma", hg);
    heat_cmd->add_option("--t", ht)->expected(1, -1);

    // resolvent
    int zn = 1;
    double zre = -1.0, zim = 0.0, sre = 2.0, sim = 0.0;
    auto* res_cmd = app.add_subcommand("resolvent", "uniform bound for (L - z)^{-s}; CSV: n,z_re,z_im,s_re,s_im,bound");
    res_cmd->add_option("--n", zn)->required();
    res_cmd->add_option("--z-re", zre);
    res_cmd->add_option("--z-im", zim);
    res_cmd->add_option("--s-re", sre);
    res_cmd->add_option("--s-im", sim);

    // wave
    int wn = 1;
    std::string wkind = "exp";
    double walpha = 0.0, wx = 0.0;
    std::vector<double> wt{1.0}, wr{0.5};
    bool wdirect = false;
    auto* wave_cmd = app.add_subcommand("wave", "wave propagator kernels; CSV: t,x,r,R,re,im");
    wave_cmd->add_option("--n", wn)->required();
    wave_cmd->add_option("--kind", wkind)->check(CLI::IsMember({"exp", "cos", "sinc"}));
    wave_cmd->add_option("--alpha", walpha, "psi = (1+s^2)^-alpha, default n+3");
    wave_cmd->add_option("--t", wt)->expected(1, -1);
    wave_cmd->add_option("--x", wx);
    wave_cmd->add_option("--r", wr, "|y| values")->expected(1, -1);
    wave_cmd->add_flag("--direct", wdirect, "use the direct spectral integral");

    // campaigns
    std::vector<std::pair<CLI::App*, Campaign>> camps;
    CampaignFlags cf;
    for (Campaign c : all_campaigns()) {
        auto* sub = app.add_subcommand(to_string(c), "verification campaign");
        sub->add_option("--n", cf.n)->expected(1, -1);
        sub->add_option("--t", cf.t)->expected(1, -1);
        sub->add_option("--gamma", cf.gamma)->expected(1, -1);
        sub->add_option("--kind", cf.kinds)->expected(1, -1);
        sub->add_option("--alpha", cf.alpha);
        sub->add_option("--seed", cf.seed);
        sub->add_option("--out", cf.out, "output directory");
        sub->add_option("--format", cf.format)->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol-preset", cf.preset)->check(CLI::IsMember({"fast", "strict"}));
        camps.push_back({sub, c});
    }

    CLI11_PARSE(app, argc, argv);

    try {
        QuadratureConfig cfg = tolerance_preset(preset);
        if (*rho_cmd) {
            DensityRoute r = parse_route(route);
            row({"n", "u", "route", "rho"});
            for (double u : ru) row({std::to_string(rn), num(u), route, num(rho(rn, u, r, cfg))});
            return 0;
        }
        if (*qkl_cmd) {
            const QklTable& t = qkl_table(ql);
            row({"l", "k", "a_re", "a_im", "P"});
            for (int k = 0; k <= ql; ++k) {
                cplx a = t.a[k].to_complex();
                std::string p = t.P[k].latex("s", "c");
                row({std::to_string(ql), std::to_string(k), num(a.real()), num(a.imag()), "\"" + p + "\""});
            }
            return 0;
        }
        if (*kernel_cmd) {
            auto f = SpectralFunction::heat(kg, kt);
            f.validate(kn);
            double S = std::pow(45.0 / kt, 1.0 / (2.0 * kg)) + 1.0;
            auto g = [&](double s) { return f(s * s) * s; };
            row({"n", "gamma", "t", "R", "value"});
            for (double R : kR)
                row({std::to_string(kn), num(kg), num(kt), num(R), num(radial_kernel_direct(g, kn, R, S, cfg).real())});
            return 0;
        }
        if (*heat_cmd) {
            row({"n", "gamma", "t", "norm"});
            for (double t : ht) row({std::to_string(hn), num(hg), num(t), num(heat_uniform_norm(hn, hg, t, cfg))});
            return 0;
        }
        if (*res_cmd) {
            double b = resolvent_norm_bound(zn, cplx(zre, zim), cplx(sre, sim), cfg);
            row({"n", "z_re", "z_im", "s_re", "s_im", "bound"});
            row({std::to_string(zn), num(zre), num(zim), num(sre), num(sim), num(b)});
            return 0;
        }
        if (*wave_cmd) {
            WaveKind kind = parse_wave_kind(wkind);
            auto psi = PsiDescriptor::rational_decay(walpha > 0.0 ? walpha : wn + 3.0);
            row({"t", "x", "r", "R", "re", "im"});
            for (double t : wt)
                for (double r : wr) {
                    GroupPoint p{wx, std::vector<double>(wn, 0.0)};
                    p.y[0] = r;
                    cplx v = wdirect ? wave_kernel_direct(kind, psi, wn, t, p, cfg) : wave_kernel(kind, psi, wn, t, p, cfg);
                    row({num(t), num(wx), num(r), num(distance(p)), num(v.real()), num(v.imag())});
                }
            return 0;
        }
        for (auto& [sub, c] : camps) {
            if (!*sub) continue;
            CampaignConfig cc;
            cc.campaign = c;
            cc.n_list = cf.n;
            cc.t_list = cf.t;
            cc.gamma_list = cf.gamma;
            for (const auto& k : cf.kinds) cc.kinds.push_back(parse_wave_kind(k));
            cc.alpha = cf.alpha;
            cc.seed = cf.seed;
            cc.out_dir = cf.out;
            cc.format = cf.format;
            cc.cfg = tolerance_preset(cf.preset);
            CampaignReport rep = run_campaign(cc);
            for (const auto& cell : rep.cells)
                std::printf("%-6s %-40s %s\n", to_string(cell.verdict).c_str(), cell.label.c_str(),
                            cell.outputs.dump().substr(0, 160).c_str());
            std::printf("%s: %d cells, exit %d, %.1f s\n", rep.campaign.c_str(), int(rep.cells.size()),
                        rep.exit_code(), rep.seconds);
            return rep.exit_code();
        }
    } catch (const DivergenceError& e) {
        std::cerr << "divergent: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
