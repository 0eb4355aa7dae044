#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "xmom/cli.hpp"
#include "xmom/errors.hpp"

namespace {

// Split "a,b,c" into doubles.
std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-moments of nonlinear functions of correlated Gaussian variables: "
                 "Hermite projections, correlation-inequality verification, and "
                 "memoryless-nonlinearity identification"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; command-line flags override");

    xmom::RunConfig cfg;
    std::string sigmas_text, rhos_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "output path (default: stdout)");
    };

    CLI::App* project = app.add_subcommand("project", "project a function onto the Hermite basis");
    project->add_option("--g", cfg.g1, "function DSL, e.g. poly:0,1,0,0.2");
    project->add_option("--sigma", cfg.sigma, "reference Gaussian std dev");
    project->add_option("--order", cfg.order, "truncation order");
    add_common(project);

    CLI::App* xmoment = app.add_subcommand("xmoment", "cross-moment E[g1(Z1) g2(Z2)]");
    xmoment->add_option("--g1", cfg.g1, "first function DSL");
    xmoment->add_option("--g2", cfg.g2, "second function DSL");
    xmoment->add_option("--sigma", cfg.sigma, "marginal std dev");
    xmoment->add_option("--rho", cfg.rho, "correlation");
    xmoment->add_option("--engine", cfg.engine, "series | quadrature | montecarlo");
    xmoment->add_option("--order", cfg.order, "series truncation order");
    xmoment->add_option("--nodes", cfg.nodes, "quadrature nodes per axis");
    xmoment->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    xmoment->add_option("--seed", cfg.seed, "Monte Carlo seed");
    add_common(xmoment);

    CLI::App* verify = app.add_subcommand("verify", "check the correlation inequality");
    verify->add_option("--g1", cfg.g1, "first function DSL");
    verify->add_option("--g2", cfg.g2, "second function DSL");
    verify->add_option("--sigma", cfg.sigma, "marginal std dev");
    verify->add_option("--rho", cfg.rho, "correlation (negative routes through the even/odd corollary)");
    verify->add_option("--engine", cfg.engine, "series | quadrature | montecarlo");
    verify->add_option("--order", cfg.order, "series truncation order");
    verify->add_option("--nodes", cfg.nodes, "quadrature nodes per axis");
    verify->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    verify->add_option("--seed", cfg.seed, "Monte Carlo seed");
    add_common(verify);

    CLI::App* channel = app.add_subcommand("channel", "conditionally i.i.d. channel check");
    channel->add_option("--spec", cfg.channel_json,
                        "channel JSON, inline or @file; {latent, conditional} or {n_bits, p, q}");
    channel->add_option("--g1", cfg.channel_g1, "function DSL or table:v0,v1,...");
    channel->add_option("--g2", cfg.channel_g2, "function DSL or table:v0,v1,...");
    channel->add_option("--nodes", cfg.nodes, "quadrature nodes (gaussian channels)");
    add_common(channel);

    CLI::App* simulate = app.add_subcommand("simulate", "generate a chain dataset");
    simulate->add_option("--sigma-x2", cfg.sigma_x2, "signal variance");
    simulate->add_option("--sigma-w2", cfg.sigma_w2, "noise variance");
    simulate->add_option("--f", cfg.f, "nonlinearity DSL");
    simulate->add_option("--samples", cfg.samples, "sample count");
    simulate->add_option("--seed", cfg.seed, "RNG seed");
    simulate->add_option("--chunks", cfg.chunks, "parallel workers (output-invariant)");
    simulate->add_option("--out", cfg.out, "dataset path prefix (required)");

    CLI::App* identify = app.add_subcommand("identify", "identify the nonlinearity from a dataset");
    identify->add_option("--data", cfg.data, "dataset path prefix from `simulate`");
    identify->add_option("--mode", cfg.mode, "forward | inverse | k1 | k2");
    identify->add_option("--order", cfg.order, "forward: Hermite order (-1 = auto)");
    identify->add_option("--degree", cfg.degree, "inverse: monomial basis degree");
    identify->add_option("--g", cfg.score_g, "k1/k2: challenger function DSL");
    identify->add_option("--seed2", cfg.seed2, "synthetic-noise seed");
    add_common(identify);

    CLI::App* sweep = app.add_subcommand("sweep", "grid of inequality checks, CSV output");
    sweep->add_option("--functions", cfg.grid_functions, "function DSL list")->delimiter(';');
    sweep->add_option("--sigmas", sigmas_text, "comma-separated sigma grid");
    sweep->add_option("--rhos", rhos_text, "comma-separated rho grid");
    sweep->add_option("--engine", cfg.engine, "series | quadrature | montecarlo");
    sweep->add_option("--order", cfg.order, "series truncation order");
    sweep->add_option("--nodes", cfg.nodes, "quadrature nodes per axis");
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    // Start from the config file (if any), then apply every flag the user
    // actually passed on top.
    xmom::RunConfig resolved;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << R"({"error":{"type":"precondition","message":"cannot open config file )"
                      << config_path << R"("}})" << '\n';
            return 1;
        }
        try {
            resolved = xmom::RunConfig::from_json(nlohmann::json::parse(in));
        } catch (const std::exception& e) {
            std::cerr << nlohmann::json{
                             {"error", {{"type", "precondition"}, {"message", e.what()}}}}
                             .dump()
                      << '\n';
            return 1;
        }
    }

    CLI::App* sub = app.get_subcommands().front();
    resolved.command = sub->get_name();
    auto passed = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    auto apply = [&](const char* flag, auto member) {
        if (passed(flag)) resolved.*member = cfg.*member;
    };
    apply("--g", &xmom::RunConfig::g1);
    apply("--g1", &xmom::RunConfig::g1);
    apply("--g2", &xmom::RunConfig::g2);
    apply("--f", &xmom::RunConfig::f);
    apply("--sigma", &xmom::RunConfig::sigma);
    apply("--rho", &xmom::RunConfig::rho);
    apply("--order", &xmom::RunConfig::order);
    apply("--nodes", &xmom::RunConfig::nodes);
    apply("--engine", &xmom::RunConfig::engine);
    apply("--sigma-x2", &xmom::RunConfig::sigma_x2);
    apply("--sigma-w2", &xmom::RunConfig::sigma_w2);
    apply("--samples", &xmom::RunConfig::samples);
    apply("--seed", &xmom::RunConfig::seed);
    apply("--seed2", &xmom::RunConfig::seed2);
    apply("--chunks", &xmom::RunConfig::chunks);
    apply("--spec", &xmom::RunConfig::channel_json);
    apply("--mode", &xmom::RunConfig::mode);
    apply("--degree", &xmom::RunConfig::degree);
    apply("--data", &xmom::RunConfig::data);
    apply("--out", &xmom::RunConfig::out);
    apply("--functions", &xmom::RunConfig::grid_functions);
    if (sub->get_name() == "channel") {
        if (passed("--g1")) resolved.channel_g1 = cfg.channel_g1;
        if (passed("--g2")) resolved.channel_g2 = cfg.channel_g2;
    }
    if (sub->get_name() == "identify" && passed("--g"))
        resolved.score_g = cfg.score_g;
    if (passed("--sigmas")) resolved.grid_sigmas = parse_double_list(sigmas_text);
    if (passed("--rhos")) resolved.grid_rhos = parse_double_list(rhos_text);

    return xmom::run(resolved, std::cout, std::cerr);
}
