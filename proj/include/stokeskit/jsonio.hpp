#pragma once

#include <json.hpp>

#include "stokeskit/connection.hpp"
#include "stokeskit/geometry.hpp"
#include "stokeskit/numstokes.hpp"
#include "stokeskit/sheafmodel.hpp"
#include "stokeskit/stokesdata.hpp"

namespace stokeskit {

using nlohmann::json;

json to_json(const Rational& r);            // "p/q" string
json to_json(const QComplex& c);            // {"re":"p/q","im":"p/q"}
json to_json(const ExponentialFactor& f);   // {"ram":m,"terms":[[k,re,im],...]}
json to_json(const Direction& d);
json directions_json(const std::vector<Direction>& dirs); // {"directions":[...],"exact":[...]}
json to_json(const Sector& s);
json to_json(const StokesDiagram& d);
json to_json(const NewtonPolygon& np);
json to_json(const FormalType& f);
json to_json(const HomShape& h);
json to_json(const ConstructibleDescription& d);
json to_json(const CMatrix& m); // row-major flat list of [re, im]
json to_json(const StokesStructure& s);
json to_json(const StokesComputation& c);

ExponentialFactor factor_from_json(const json& j);
FormalType formal_from_json(const json& j);
ConnectionSpec connection_from_json(const json& j); // {"operator":...}/{"system":...}/{"formal":...}
CMatrix matrix_from_json(const json& j, int n);
StokesStructure structure_from_json(const json& j);
std::vector<Trivialization> trivializations_from_json(const json& j, int n);

} // namespace stokeskit
