#pragma once

#include "defexp/conjugate.hpp"
#include "defexp/deformation.hpp"
#include "defexp/family.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace defexp {

using ordered_json = nlohmann::ordered_json;

// Canonical serialization: insertion key order, numbers rendered with 17
// significant digits via to_chars, two-space indentation, one trailing
// newline. Identical values always produce identical bytes.
std::string canonical_json(const ordered_json& value);
std::string format_double(double v);

ordered_json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const std::string& path);

Deformation deformation_from_json(const nlohmann::json& j, const std::string& path,
                                  QuadratureConfig quad = {}, InversionConfig inv = {});
ordered_json deformation_to_json(const Deformation& d);

SampleSpace space_from_json(const nlohmann::json& j, const std::string& path);
ordered_json space_to_json(const SampleSpace& s);

// A model file bundles everything needed to build a family, plus optional
// solver tolerance overrides. Not default-constructible; build one through
// model_from_json / load_model.
struct Model {
  Deformation deformation;
  SampleSpace space;
  Density base_density;
  Matrix statistics;
  FamilyTolerances family_tolerances;
  ConjugateOptions conjugate_options;
  double lp_tol = 1e-9;

  PhiExponentialFamily family() const;
};

Model model_from_json(const nlohmann::json& j);
Model load_model(const std::string& json_text);
Model load_model_file(const std::string& file_path);

}  // namespace defexp
