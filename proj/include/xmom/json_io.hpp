#ifndef XMOM_JSON_IO_HPP
#define XMOM_JSON_IO_HPP

#include <nlohmann/json.hpp>

#include "xmom/channels.hpp"
#include "xmom/hermite.hpp"
#include "xmom/ident.hpp"
#include "xmom/inequality.hpp"

namespace xmom {

void to_json(nlohmann::json& j, const HermiteSeries& s);
void from_json(const nlohmann::json& j, HermiteSeries& s);

void to_json(nlohmann::json& j, const CorrelationReport& r);
void from_json(const nlohmann::json& j, CorrelationReport& r);

void to_json(nlohmann::json& j, const IdentResult& r);
void from_json(const nlohmann::json& j, IdentResult& r);

} // namespace xmom

#endif
