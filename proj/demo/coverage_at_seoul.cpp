// Coverage of a terminal at 37 N against a 100-satellite constellation:
// analytic binomial model, its Poisson limit and a short simulation.

#include <cstdio>

#include "geosat/geosat.hpp"

int main()
{
    using namespace geosat;
    auto const ctx = GeometryContext::geostationary();
    auto const cfg = reference_network(100, 3.0, 20.0, 1);
    double const phi = deg_to_rad(37.0);
    auto const terminal = TerminalPosition::at(ctx, phi, deg_to_rad(137.0));

    std::printf("visible arc %.0f km, p_vis %.4f\n", visible_arc_length(ctx, phi), p_vis(ctx, phi));
    std::printf("%8s %8s %8s %8s\n", "tau_dB", "bpp", "ppp", "mc");
    for (double tau_db : {-10.0, -5.0, 0.0, 5.0, 10.0})
    {
        double const tau = db_to_linear(tau_db);
        auto const bpp = coverage_bpp(cfg, ctx, phi, tau);
        auto const ppp = coverage_ppp(cfg, ctx, phi, tau);
        auto const mc = estimate(cfg, ctx, terminal, tau, 20000, 7);
        std::printf("%8.1f %8.4f %8.4f %8.4f\n",
                    tau_db,
                    bpp.probability,
                    ppp.probability,
                    mc.result.probability);
    }
}
