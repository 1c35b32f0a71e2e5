#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "counterexamples.hpp"
#include "inversion.hpp"

namespace crackwave {

/// %.17g, the only float format used in CSV output.
std::string fmt17(double v);

/// x1,x2,x3,re_u,im_u then re/im of each gradient component when present.
void write_field_csv(std::ostream& os, const FieldSamples& f);
/// t,iota,predicted_bad_nearest,dist_to_predicted then iota_l per channel.
void write_sweep_csv(std::ostream& os, const SweepResult& r);

nlohmann::json to_json(const GapReport& g);
nlohmann::json to_json(const EigenPair& e);
nlohmann::json to_json(const DecayReport& d);
nlohmann::json to_json(const GeometryFit& f);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json to_json(const PlanarCrackParams& p);

/// Missing keys keep the defaults of `base`; unknown keys are rejected with their path.
PlanarCrackParams params_from_json(const nlohmann::json& j, const PlanarCrackParams& base = {});

nlohmann::json complex_list(const std::vector<cplx>& v);
std::vector<cplx> complex_list_from_json(const nlohmann::json& j, const std::string& path);

/// Writes text to a file, raising an io error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace crackwave
