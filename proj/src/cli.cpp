#include "xmom/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "xmom/channels.hpp"
#include "xmom/errors.hpp"
#include "xmom/ident.hpp"
#include "xmom/inequality.hpp"
#include "xmom/json_io.hpp"
#include "xmom/mehler.hpp"
#include "xmom/simulate.hpp"

namespace xmom {

std::string format17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

nlohmann::json RunConfig::to_json() const {
    return nlohmann::json{
        {"command", command},       {"g1", g1},
        {"g2", g2},                 {"f", f},
        {"sigma", sigma},           {"rho", rho},
        {"order", order},           {"nodes", nodes},
        {"engine", engine},         {"sigma_x2", sigma_x2},
        {"sigma_w2", sigma_w2},     {"samples", samples},
        {"seed", seed},             {"seed2", seed2},
        {"chunks", chunks},         {"grid_functions", grid_functions},
        {"grid_sigmas", grid_sigmas}, {"grid_rhos", grid_rhos},
        {"channel_json", channel_json}, {"channel_g1", channel_g1},
        {"channel_g2", channel_g2}, {"mode", mode},
        {"degree", degree},         {"data", data},
        {"score_g", score_g},       {"out", out},
        {"format", format},
    };
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    auto get = [&](const char* key, auto& dest) {
        if (j.contains(key)) dest = j.at(key).get<std::decay_t<decltype(dest)>>();
    };
    get("command", cfg.command);
    get("g1", cfg.g1);
    get("g2", cfg.g2);
    get("f", cfg.f);
    get("sigma", cfg.sigma);
    get("rho", cfg.rho);
    get("order", cfg.order);
    get("nodes", cfg.nodes);
    get("engine", cfg.engine);
    get("sigma_x2", cfg.sigma_x2);
    get("sigma_w2", cfg.sigma_w2);
    get("samples", cfg.samples);
    get("seed", cfg.seed);
    get("seed2", cfg.seed2);
    get("chunks", cfg.chunks);
    get("grid_functions", cfg.grid_functions);
    get("grid_sigmas", cfg.grid_sigmas);
    get("grid_rhos", cfg.grid_rhos);
    get("channel_json", cfg.channel_json);
    get("channel_g1", cfg.channel_g1);
    get("channel_g2", cfg.channel_g2);
    get("mode", cfg.mode);
    get("degree", cfg.degree);
    get("data", cfg.data);
    get("score_g", cfg.score_g);
    get("out", cfg.out);
    get("format", cfg.format);
    return cfg;
}

namespace {

Engine parse_engine(const std::string& name) {
    if (name == "series") return Engine::Series;
    if (name == "quadrature") return Engine::Quadrature;
    if (name == "montecarlo") return Engine::MonteCarlo;
    throw PreconditionError("unknown engine '" + name +
                            "' (expected series, quadrature or montecarlo)");
}

EngineOptions options_from(const RunConfig& cfg) {
    EngineOptions opts;
    opts.series_order = cfg.order;
    opts.quad_nodes = cfg.nodes;
    opts.mc_samples = cfg.samples;
    opts.mc_seed = cfg.seed;
    return opts;
}

// Output sink: file when a path is configured, else the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw PreconditionError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

void emit_json(const RunConfig& cfg, std::ostream& os, const char* key,
               const nlohmann::json& payload) {
    nlohmann::json doc;
    doc["config"] = cfg.to_json();
    doc[key] = payload;
    os << doc.dump(2) << '\n';
}

ChannelFunc parse_channel_func(const std::string& text) {
    if (text.rfind("table:", 0) == 0) {
        std::vector<double> values;
        size_t pos = 6;
        while (pos <= text.size()) {
            size_t comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            try {
                values.push_back(std::stod(text.substr(pos, comma - pos)));
            } catch (const std::exception&) {
                throw PreconditionError("channel function: bad table entry at position " +
                                        std::to_string(pos) + " in '" + text + "'");
            }
            pos = comma + 1;
        }
        if (values.empty())
            throw PreconditionError("channel function: empty table");
        return ChannelFunc(std::move(values));
    }
    return ChannelFunc(parse_function(text));
}

int cmd_project(const RunConfig& cfg, std::ostream& os) {
    const FunctionSpec g = parse_function(cfg.g1.empty() ? cfg.f : cfg.g1);
    const HermiteSeries s = project(g, cfg.sigma, cfg.order);
    emit_json(cfg, os, "series", s);
    return 0;
}

int cmd_xmoment(const RunConfig& cfg, std::ostream& os) {
    const FunctionSpec g1 = parse_function(cfg.g1);
    const FunctionSpec g2 = parse_function(cfg.g2);
    const GaussianPairParams p(cfg.sigma, cfg.rho);
    const Engine engine = parse_engine(cfg.engine);

    nlohmann::json payload;
    if (engine == Engine::Series) {
        const HermiteSeries s1 = project(g1, cfg.sigma, cfg.order);
        const HermiteSeries s2 = project(g2, cfg.sigma, cfg.order);
        payload = {{"value", cross_moment(s1, s2, cfg.rho)}, {"stderr", 0.0}};
    } else if (engine == Engine::Quadrature) {
        payload = {{"value", cross_moment_quadrature(g1, g2, p, cfg.nodes)}, {"stderr", 0.0}};
    } else {
        const PairSample pairs = sample_bivariate(p, cfg.samples, cfg.seed);
        const MomentEstimate est = estimate_moment(
            {{std::span<const double>(pairs.z1), &g1}, {std::span<const double>(pairs.z2), &g2}});
        payload = {{"value", est.value}, {"stderr", est.se}};
    }
    emit_json(cfg, os, "xmoment", payload);
    return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    const FunctionSpec g1 = parse_function(cfg.g1);
    const FunctionSpec g2 = parse_function(cfg.g2);
    const GaussianPairParams p(cfg.sigma, cfg.rho);
    const Engine engine = parse_engine(cfg.engine);
    if (cfg.rho == 0.0)
        throw PreconditionError("verify: rho must be nonzero");
    const CorrelationReport report =
        cfg.rho > 0.0 ? lemma1_check(g1, g2, p, engine, options_from(cfg))
                      : corollary_check(g1, g2, p, engine, options_from(cfg));
    emit_json(cfg, os, "report", report);
    return 0;
}

int cmd_channel(const RunConfig& cfg, std::ostream& os) {
    if (cfg.channel_json.empty())
        throw PreconditionError("channel: a channel description is required");
    std::string text = cfg.channel_json;
    if (text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in)
            throw PreconditionError("channel: cannot open " + text.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    const ConditionalChannel ch = parse_channel_json(text);
    const ChannelFunc g1 = parse_channel_func(cfg.channel_g1);
    const ChannelFunc g2 = parse_channel_func(cfg.channel_g2);

    const CorrelationReport report = lemma2_check(ch, g1, g2, cfg.nodes);
    nlohmann::json payload = report;
    if (ch.is_finite()) {
        payload = nlohmann::json{
            {"report", report},
            {"enumerated_cross", enumerate_expectation(ch, g1, g2)},
        };
        emit_json(cfg, os, "channel", payload);
    } else {
        emit_json(cfg, os, "report", payload);
    }
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& os) {
    if (cfg.out.empty())
        throw PreconditionError("simulate: --out <prefix> is required");
    ChainConfig cc;
    cc.sigma_x2 = cfg.sigma_x2;
    cc.sigma_w2 = cfg.sigma_w2;
    cc.f = parse_function(cfg.f);
    cc.samples = cfg.samples;
    cc.seed = cfg.seed;
    cc.chunks = cfg.chunks;
    const ChainDataset ds = run_chain(cc);
    write_dataset(ds, cfg.out);

    nlohmann::json doc;
    doc["config"] = cfg.to_json();
    doc["written"] = {cfg.out + ".csv", cfg.out + ".json"};
    doc["stats"] = {
        {"x", {{"mean", ds.x_stats.mean}, {"var", ds.x_stats.var}}},
        {"z", {{"mean", ds.z_stats.mean}, {"var", ds.z_stats.var}}},
        {"y", {{"mean", ds.y_stats.mean}, {"var", ds.y_stats.var}}},
    };
    os << doc.dump(2) << '\n';
    return 0;
}

int cmd_identify(const RunConfig& cfg, std::ostream& os) {
    if (cfg.data.empty())
        throw PreconditionError("identify: --data <prefix> is required");
    const ChainDataset ds = read_dataset(cfg.data);

    nlohmann::json payload;
    if (cfg.mode == "forward") {
        IdentResult res = identify_forward(ds, cfg.order);
        const std::vector<double> wp = synth_noise(ds.config, cfg.seed2);
        const double c = recover_scale(res, ds, wp);
        payload = res;
        payload["recovered_c"] = c;
    } else if (cfg.mode == "inverse") {
        const IdentResult res = identify_inverse(ds, cfg.degree);
        payload = res;
    } else if (cfg.mode == "k1") {
        const MomentEstimate est = k1_score(ds, parse_function(cfg.score_g));
        payload = {{"k1", est.value}, {"stderr", est.se}};
    } else if (cfg.mode == "k2") {
        const std::vector<double> wp = synth_noise(ds.config, cfg.seed2);
        const double alpha = alpha_from_snr(ds.config.sigma_x2, ds.config.sigma_w2);
        const MomentEstimate est = k2_score(ds, wp, parse_function(cfg.score_g), alpha);
        payload = {{"k2", est.value}, {"stderr", est.se}};
    } else {
        throw PreconditionError("identify: unknown mode '" + cfg.mode +
                                "' (expected forward, inverse, k1 or k2)");
    }
    emit_json(cfg, os, "result", payload);
    return 0;
}

struct SweepCell {
    std::string g1, g2;
    double sigma = 0.0, rho = 0.0;
    std::string engine_label;
    CorrelationReport report;
    bool ok = false;
    std::string error;
};

void write_sweep_csv(const RunConfig& cfg, const std::vector<SweepCell>& cells,
                     std::ostream& os) {
    os << "g1,g2,sigma,rho,engine,lhs,rhs,slack,equality,error\n";
    os << "# config: " << cfg.to_json().dump() << '\n';
    double min_slack = std::numeric_limits<double>::infinity();
    size_t errors = 0;
    for (const auto& c : cells) {
        os << '"' << c.g1 << "\",\"" << c.g2 << "\"," << format17(c.sigma) << ','
           << format17(c.rho) << ',' << c.engine_label << ',';
        if (c.ok) {
            os << format17(c.report.lhs) << ',' << format17(c.report.rhs) << ','
               << format17(c.report.slack) << ',' << (c.report.equality ? "true" : "false")
               << ",\n";
            min_slack = std::min(min_slack, c.report.slack);
        } else {
            os << ",,,,\"" << c.error << "\"\n";
            ++errors;
        }
    }
    if (!cells.empty()) {
        os << "\"summary\",\"\",,,"
           << cfg.engine << ",,,"
           << (std::isfinite(min_slack) ? format17(min_slack) : std::string()) << ",,\""
           << "cells=" << cells.size() << " errors=" << errors << "\"\n";
    }
}

int cmd_sweep(const RunConfig& cfg, std::ostream& os) {
    const Engine engine = parse_engine(cfg.engine);
    const EngineOptions opts = options_from(cfg);

    std::vector<FunctionSpec> fns;
    for (const auto& text : cfg.grid_functions)
        fns.push_back(parse_function(text));

    std::vector<SweepCell> cells;
    for (double sigma : cfg.grid_sigmas) {
        // Per-(sigma) projection cache for the series engine.
        std::map<std::string, HermiteSeries> series_cache;
        auto series_of = [&](const FunctionSpec& g) -> const HermiteSeries& {
            auto it = series_cache.find(g.label());
            if (it == series_cache.end())
                it = series_cache.emplace(g.label(), project(g, sigma, opts.series_order)).first;
            return it->second;
        };
        for (double rho : cfg.grid_rhos) {
            // Per-(sigma, rho) cross-moment cache for the quadrature engine;
            // the pair is exchangeable, so the matrix is symmetric.
            std::map<std::pair<std::string, std::string>, double> quad_cache;
            auto quad_of = [&](const FunctionSpec& a, const FunctionSpec& b) {
                auto key = std::minmax(a.label(), b.label());
                auto it = quad_cache.find(key);
                if (it == quad_cache.end()) {
                    const double v = cross_moment_quadrature(
                        a, b, GaussianPairParams(sigma, rho), opts.quad_nodes);
                    it = quad_cache.emplace(key, v).first;
                }
                return it->second;
            };
            for (const auto& f1 : fns)
                for (const auto& f2 : fns) {
                    SweepCell cell;
                    cell.g1 = f1.label();
                    cell.g2 = f2.label();
                    cell.sigma = sigma;
                    cell.rho = rho;
                    cell.engine_label = engine_name(engine);
                    try {
                        if (rho == 0.0)
                            throw PreconditionError("rho must be nonzero");
                        if (rho > 0.0) {
                            if (engine == Engine::Series)
                                cell.report = report_from_series(series_of(f1), series_of(f2), rho);
                            else if (engine == Engine::Quadrature)
                                cell.report = report_from_moments(quad_of(f1, f2), quad_of(f1, f1),
                                                                  quad_of(f2, f2), engine);
                            else
                                cell.report = lemma1_check(f1, f2, GaussianPairParams(sigma, rho),
                                                           engine, opts);
                        } else {
                            cell.report = corollary_check(f1, f2, GaussianPairParams(sigma, rho),
                                                          engine, opts);
                            cell.engine_label = "corollary";
                        }
                        cell.ok = true;
                    } catch (const std::exception& e) {
                        cell.error = e.what();
                    }
                    cells.push_back(std::move(cell));
                }
        }
    }
    write_sweep_csv(cfg, cells, os);
    return 0;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& fallback_out, std::ostream& err) {
    try {
        // simulate treats cfg.out as a dataset prefix, not a report path.
        if (cfg.command == "simulate") return cmd_simulate(cfg, fallback_out);
        Sink sink(cfg.out, fallback_out);
        std::ostream& os = sink.stream();
        if (cfg.command == "project") return cmd_project(cfg, os);
        if (cfg.command == "xmoment") return cmd_xmoment(cfg, os);
        if (cfg.command == "verify") return cmd_verify(cfg, os);
        if (cfg.command == "channel") return cmd_channel(cfg, os);
        if (cfg.command == "identify") return cmd_identify(cfg, os);
        if (cfg.command == "sweep") return cmd_sweep(cfg, os);
        throw PreconditionError("unknown command '" + cfg.command + "'");
    } catch (const PreconditionError& e) {
        err << nlohmann::json{{"error", {{"type", "precondition"}, {"message", e.what()}}}}.dump()
            << '\n';
        return 1;
    } catch (const DegeneracyError& e) {
        err << nlohmann::json{{"error", {{"type", "degeneracy"}, {"message", e.what()}}}}.dump()
            << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << nlohmann::json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
            << '\n';
        return 2;
    }
}

} // namespace xmom
