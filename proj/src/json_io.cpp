#include "xmom/json_io.hpp"

#include "xmom/errors.hpp"

namespace xmom {

void to_json(nlohmann::json& j, const HermiteSeries& s) {
    j = nlohmann::json{{"sigma", s.sigma}, {"coeffs", s.coeffs}};
}

void from_json(const nlohmann::json& j, HermiteSeries& s) {
    s.sigma = j.at("sigma").get<double>();
    s.coeffs = j.at("coeffs").get<std::vector<double>>();
}

namespace {

Engine engine_from_name(const std::string& name) {
    if (name == "series") return Engine::Series;
    if (name == "quadrature") return Engine::Quadrature;
    if (name == "montecarlo") return Engine::MonteCarlo;
    throw PreconditionError("unknown engine '" + name +
                            "' (expected series, quadrature or montecarlo)");
}

} // namespace

void to_json(nlohmann::json& j, const CorrelationReport& r) {
    j = nlohmann::json{
        {"lhs", r.lhs},
        {"rhs", r.rhs},
        {"slack", r.slack},
        {"equality", r.equality},
        {"engine", engine_name(r.engine)},
        {"tolerance", r.tolerance},
        {"route", r.route},
        {"cross", r.cross},
        {"auto1", r.auto1},
        {"auto2", r.auto2},
        {"slack_stderr", r.slack_stderr},
    };
}

void from_json(const nlohmann::json& j, CorrelationReport& r) {
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.slack = j.at("slack").get<double>();
    r.equality = j.at("equality").get<bool>();
    r.engine = engine_from_name(j.at("engine").get<std::string>());
    r.tolerance = j.at("tolerance").get<double>();
    r.route = j.at("route").get<std::string>();
    r.cross = j.at("cross").get<double>();
    r.auto1 = j.at("auto1").get<double>();
    r.auto2 = j.at("auto2").get<double>();
    r.slack_stderr = j.at("slack_stderr").get<double>();
}

void to_json(nlohmann::json& j, const IdentResult& r) {
    j = nlohmann::json{
        {"basis", r.basis},       {"sigma", r.sigma},
        {"coeffs", r.coeffs},     {"stderr", r.stderrs},
        {"scale_c", r.scale_c},   {"score", r.score},
        {"order", r.order},       {"diagnostics", r.diagnostics},
    };
}

void from_json(const nlohmann::json& j, IdentResult& r) {
    r.basis = j.at("basis").get<std::string>();
    r.sigma = j.at("sigma").get<double>();
    r.coeffs = j.at("coeffs").get<std::vector<double>>();
    r.stderrs = j.at("stderr").get<std::vector<double>>();
    r.scale_c = j.at("scale_c").get<double>();
    r.score = j.at("score").get<double>();
    r.order = j.at("order").get<int>();
    r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
}

} // namespace xmom
