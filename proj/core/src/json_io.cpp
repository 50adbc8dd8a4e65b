#include "defexp/json_io.hpp"

#include "defexp/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace defexp {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void write_value(std::string& out, const ordered_json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(2 * indent), ' ');
  const std::string pad_inner(static_cast<std::size_t>(2 * (indent + 1)), ' ');
  switch (v.type()) {
    case nlohmann::detail::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_inner;
        append_escaped(out, item.key());
        out += ": ";
        write_value(out, item.value(), indent + 1);
      }
      out += '\n';
      out += pad;
      out += '}';
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Scalar-only arrays stay on one line; nested structures get one
      // element per line.
      bool scalars = true;
      for (const auto& e : v) scalars = scalars && !e.is_structured();
      if (scalars) {
        out += '[';
        bool first = true;
        for (const auto& e : v) {
          if (!first) out += ", ";
          first = false;
          write_value(out, e, indent);
        }
        out += ']';
      } else {
        out += "[\n";
        bool first = true;
        for (const auto& e : v) {
          if (!first) out += ",\n";
          first = false;
          out += pad_inner;
          write_value(out, e, indent + 1);
        }
        out += '\n';
        out += pad;
        out += ']';
      }
      return;
    }
    case nlohmann::detail::value_t::string:
      append_escaped(out, v.get_ref<const std::string&>());
      return;
    case nlohmann::detail::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      return;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      return;
    case nlohmann::detail::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

double require_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) fail(errc::validation, "expected a number", path);
  return j.get<double>();
}

int require_int(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(errc::validation, "expected an integer", path);
  return j.get<int>();
}

const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                    const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    fail(errc::validation, std::string("missing field '") + key + "'", path);
  }
  return j.at(key);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  // 17 significant digits round-trip any double; locale-independent.
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) fail(errc::numerical, "number formatting failed");
  return std::string(buf, ptr);
}

std::string canonical_json(const ordered_json& value) {
  std::string out;
  write_value(out, value, 0);
  out += '\n';
  return out;
}

ordered_json to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(errc::validation, "expected a nonempty numeric array", path);
  }
  Vector out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out[static_cast<int>(i)] = require_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Deformation deformation_from_json(const nlohmann::json& j, const std::string& path,
                                  QuadratureConfig quad, InversionConfig inv) {
  const auto& kind_field = require_field(j, "kind", path);
  if (!kind_field.is_string()) fail(errc::validation, "kind must be a string", path + ".kind");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "classical") {
    return Deformation::classical();
  }
  if (kind == "kaniadakis") {
    const double kappa = require_number(require_field(j, "kappa", path), path + ".kappa");
    return Deformation::kaniadakis(kappa, quad, inv);
  }
  if (kind == "from_psi") {
    const auto& table = require_field(j, "psi_table", path);
    if (j.contains("interpolation") &&
        j.at("interpolation").get<std::string>() != "monotone-cubic") {
      fail(errc::validation, "only monotone-cubic interpolation is supported",
           path + ".interpolation");
    }
    const Vector u = vector_from_json(require_field(table, "u", path + ".psi_table"),
                                      path + ".psi_table.u");
    const Vector psi = vector_from_json(require_field(table, "psi", path + ".psi_table"),
                                        path + ".psi_table.psi");
    if (u.size() != psi.size()) {
      fail(errc::validation, "psi_table arrays must be aligned", path + ".psi_table");
    }
    return Deformation::from_psi_table(std::vector<double>(u.data(), u.data() + u.size()),
                                       std::vector<double>(psi.data(), psi.data() + psi.size()),
                                       quad, inv);
  }
  fail(errc::validation, "unknown deformation kind '" + kind + "'", path + ".kind");
}

ordered_json deformation_to_json(const Deformation& d) {
  ordered_json out;
  switch (d.kind()) {
    case DeformationKind::classical:
      out["kind"] = "classical";
      return out;
    case DeformationKind::kaniadakis:
      out["kind"] = "kaniadakis";
      out["kappa"] = d.kappa();
      return out;
    case DeformationKind::from_psi: {
      if (!d.psi_table()) {
        fail(errc::unsupported, "a programmatic rate function has no JSON form");
      }
      out["kind"] = "from_psi";
      ordered_json table;
      table["u"] = d.psi_table()->u;
      table["psi"] = d.psi_table()->psi;
      out["psi_table"] = std::move(table);
      out["interpolation"] = "monotone-cubic";
      return out;
    }
    case DeformationKind::self_dual_sigma:
      fail(errc::unsupported, "sigma-constructed deformations have no JSON form");
  }
  fail(errc::validation, "unknown deformation kind");
}

SampleSpace space_from_json(const nlohmann::json& j, const std::string& path) {
  const auto& labels_field = require_field(j, "labels", path);
  if (!labels_field.is_array()) fail(errc::validation, "labels must be an array", path + ".labels");
  std::vector<std::string> labels;
  labels.reserve(labels_field.size());
  for (std::size_t i = 0; i < labels_field.size(); ++i) {
    const auto& item = labels_field[i];
    if (item.is_string()) labels.push_back(item.get<std::string>());
    else if (item.is_number_integer()) labels.push_back(std::to_string(item.get<long>()));
    else fail(errc::validation, "labels must be strings", path + ".labels[" + std::to_string(i) + "]");
  }
  const Vector mu = vector_from_json(require_field(j, "mu", path), path + ".mu");
  return SampleSpace(std::move(labels), mu);
}

ordered_json space_to_json(const SampleSpace& s) {
  ordered_json out;
  out["labels"] = s.labels();
  out["mu"] = to_json(s.mu());
  return out;
}

PhiExponentialFamily Model::family() const {
  return PhiExponentialFamily(deformation, space, base_density, statistics, family_tolerances);
}

Model model_from_json(const nlohmann::json& j) {
  QuadratureConfig quad;
  InversionConfig inv;
  FamilyTolerances fam_tol;
  ConjugateOptions conj;
  double lp_tol = 1e-9;
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) fail(errc::validation, "tolerances must be an object", "tolerances");
    if (t.contains("alpha_tol")) fam_tol.alpha_tol = require_number(t.at("alpha_tol"), "tolerances.alpha_tol");
    if (t.contains("newton_max_iter")) fam_tol.newton_max_iter = require_int(t.at("newton_max_iter"), "tolerances.newton_max_iter");
    if (t.contains("quadrature_abs_tol")) quad.abs_tol = require_number(t.at("quadrature_abs_tol"), "tolerances.quadrature_abs_tol");
    if (t.contains("quadrature_max_subdivisions")) quad.max_subdivisions = require_int(t.at("quadrature_max_subdivisions"), "tolerances.quadrature_max_subdivisions");
    if (t.contains("inversion_tol")) inv.tol = require_number(t.at("inversion_tol"), "tolerances.inversion_tol");
    if (t.contains("inversion_max_iter")) inv.max_iter = require_int(t.at("inversion_max_iter"), "tolerances.inversion_max_iter");
    if (t.contains("lp_tol")) lp_tol = require_number(t.at("lp_tol"), "tolerances.lp_tol");
    if (t.contains("conjugate_newton_tol")) conj.newton_tol = require_number(t.at("conjugate_newton_tol"), "tolerances.conjugate_newton_tol");
    if (t.contains("conjugate_max_iter")) conj.max_iter = require_int(t.at("conjugate_max_iter"), "tolerances.conjugate_max_iter");
    if (t.contains("boundary_max_iter")) conj.boundary_max_iter = require_int(t.at("boundary_max_iter"), "tolerances.boundary_max_iter");
    if (t.contains("witness_bound")) conj.witness_bound = require_number(t.at("witness_bound"), "tolerances.witness_bound");
    if (t.contains("witness_max_steps")) conj.witness_max_steps = require_int(t.at("witness_max_steps"), "tolerances.witness_max_steps");
  }
  conj.lp_tol = lp_tol;

  Deformation deformation =
      deformation_from_json(require_field(j, "deformation", ""), "deformation", quad, inv);
  SampleSpace space = space_from_json(require_field(j, "space", ""), "space");
  const Vector base = vector_from_json(require_field(j, "base_density", ""), "base_density");

  const auto& stats_field = require_field(j, "statistics", "");
  if (!stats_field.is_array() || stats_field.empty()) {
    fail(errc::validation, "statistics must be a nonempty array of rows", "statistics");
  }
  Matrix statistics(stats_field.size(), space.size());
  for (std::size_t r = 0; r < stats_field.size(); ++r) {
    const Vector row =
        vector_from_json(stats_field[r], "statistics[" + std::to_string(r) + "]");
    if (row.size() != space.size()) {
      fail(errc::validation, "statistic rows must have one entry per point",
           "statistics[" + std::to_string(r) + "]");
    }
    statistics.row(static_cast<int>(r)) = row.transpose();
  }

  Density base_density = space.density(base);
  return Model{std::move(deformation), std::move(space), std::move(base_density),
               std::move(statistics), fam_tol, conj, lp_tol};
}

Model load_model(const std::string& json_text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::validation, std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(parsed);
}

Model load_model_file(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) fail(errc::validation, "cannot open model file '" + file_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model(buffer.str());
}

}  // namespace defexp
