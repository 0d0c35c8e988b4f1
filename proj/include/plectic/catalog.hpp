#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "plectic/model.hpp"

namespace plectic {

/// Names accepted by builtin(), in catalog order.
const std::vector<std::string>& builtin_names();

/// Throws std::invalid_argument for an unknown name.
Model builtin(const std::string& name);

/// A builtin name or a path to a model file.
Model resolve_model(const std::string& name_or_path);

/// Model file I/O. Errors carry the offending field ("algebroid.anchor[1]").
Model model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& model);
Model load_model(const std::string& path);
void save_model(const Model& model, const std::string& path);

/// Parses a multi-index key such as "0,2|1" into increasing TM and A index lists.
void parse_index_key(const std::string& key, std::vector<int>& tm, std::vector<int>& alg);
std::string index_key(MultiIndex::Mask tm, MultiIndex::Mask alg, bool mixed);

/// Error in a model file; what() names the field.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace plectic
