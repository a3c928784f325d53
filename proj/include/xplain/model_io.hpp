#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "xplain/explain.hpp"
#include "xplain/models.hpp"

namespace xplain {

using Json = nlohmann::json;

// Model files. Missing "features" lists are collected in order of first
// appearance. Decision trees are simplified and OBDD vertices renumbered on
// load, so serialization is canonical.
Model model_from_json(const Json& json);
Json model_to_json(const Model& model);
Model load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const Model& model);

// Sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& json);
Json parse_json_text(const std::string& text);

Example example_from_json(const Json& json, const FeatureSpace& space);
Json example_to_json(const Example& e, const FeatureSpace& space);
PartialExample partial_from_json(const Json& json, const FeatureSpace& space);
Json partial_to_json(const PartialExample& tau, const FeatureSpace& space);
FeatureSet feature_set_from_json(const Json& json, const FeatureSpace& space);
Json feature_set_to_json(const FeatureSet& set, const FeatureSpace& space);

// {"kind","minimality","target","k"}; target is an example object for local
// kinds and 0/1 for global kinds. The string "e0" stands for the all-zero example.
ExplanationQuery query_from_json(const Json& json, const FeatureSpace& space);
Json query_to_json(const ExplanationQuery& q, const FeatureSpace& space);
Witness witness_from_json(const Json& json, const FeatureSpace& space, bool local);
Json witness_to_json(const Witness& w, const FeatureSpace& space);

}  // namespace xplain
