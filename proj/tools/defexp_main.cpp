// defexp: batch front end for deformed exponential families on finite sample
// spaces. Loads a model from JSON, runs one operation, and writes a JSON or
// CSV result with canonical formatting (identical inputs give identical
// bytes).
//
// Exit codes: 0 success/finite, 1 infeasible or outside the polytope,
// 2 input validation error, 3 numerical failure.

#include "check_suite.hpp"

#include <defexp/conjugate.hpp>
#include <defexp/errors.hpp>
#include <defexp/json_io.hpp>
#include <defexp/oracle.hpp>
#include <defexp/polytope.hpp>
#include <defexp/version.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using defexp::ordered_json;
using defexp::Vector;

constexpr int kExitOk = 0;
constexpr int kExitOutside = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

Vector parse_vector(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      defexp::fail(defexp::errc::validation, "cannot parse '" + item + "' as a number", flag);
    }
  }
  if (values.empty()) {
    defexp::fail(defexp::errc::validation, "expected a comma-separated list of numbers", flag);
  }
  Vector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<int>(i)] = values[i];
  return out;
}

// A direction flag is either a statistic index (centered basis row) or an
// inline vector with one entry per point.
Vector parse_direction(const std::string& text, const defexp::PhiExponentialFamily& fam,
                       const std::string& flag) {
  if (text.find(',') == std::string::npos) {
    try {
      std::size_t used = 0;
      const int index = std::stoi(text, &used);
      if (used == text.size()) {
        if (index < 0 || index >= fam.dimension()) {
          defexp::fail(defexp::errc::validation,
                       "statistic index out of range [0, " +
                           std::to_string(fam.dimension() - 1) + "]",
                       flag);
        }
        return fam.centered_basis().row(index).transpose();
      }
    } catch (const defexp::error&) {
      throw;
    } catch (const std::exception&) {
      // fall through to vector parsing
    }
  }
  const Vector v = parse_vector(text, flag);
  if (v.size() != fam.points()) {
    defexp::fail(defexp::errc::validation,
                 "direction needs one entry per point (" + std::to_string(fam.points()) + ")",
                 flag);
  }
  return v;
}

void flatten_csv(const ordered_json& value, const std::string& prefix,
                 std::vector<std::pair<std::string, std::string>>& cells) {
  if (value.is_object()) {
    for (const auto& item : value.items()) {
      flatten_csv(item.value(), prefix.empty() ? item.key() : prefix + "_" + item.key(), cells);
    }
  } else if (value.is_array()) {
    int i = 0;
    for (const auto& e : value) {
      flatten_csv(e, prefix + "_" + std::to_string(i++), cells);
    }
  } else if (value.is_string()) {
    cells.emplace_back(prefix, value.get<std::string>());
  } else if (value.is_boolean()) {
    cells.emplace_back(prefix, value.get<bool>() ? "true" : "false");
  } else if (value.is_number_integer()) {
    cells.emplace_back(prefix, std::to_string(value.get<std::int64_t>()));
  } else if (value.is_number()) {
    cells.emplace_back(prefix, defexp::format_double(value.get<double>()));
  } else {
    cells.emplace_back(prefix, "");
  }
}

std::string to_csv(const ordered_json& value) {
  std::vector<std::pair<std::string, std::string>> cells;
  flatten_csv(value, "", cells);
  std::string header, row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      header += ',';
      row += ',';
    }
    header += cells[i].first;
    row += cells[i].second;
  }
  return header + "\n" + row + "\n";
}

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

void write_result(const ordered_json& result, const OutputOptions& opts) {
  const std::string text =
      opts.format == "csv" ? to_csv(result) : defexp::canonical_json(result);
  if (opts.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
      defexp::fail(defexp::errc::validation, "cannot open output file '" + opts.out_path + "'");
    }
    out << text;
  }
}

ordered_json conjugate_to_json(const defexp::ConjugateResult& res) {
  ordered_json out;
  out["status"] = defexp::conjugate_status_name(res.status);
  if (res.finite()) {
    out["value"] = res.value;
  } else {
    out["value"] = "+inf";
  }
  out["attained"] = res.status == defexp::ConjugateStatus::attained_interior;
  if (res.maximizer) out["theta_hat"] = defexp::to_json(*res.maximizer);
  if (res.certificate) {
    ordered_json sep;
    sep["a"] = defexp::to_json(res.certificate->a);
    sep["a0"] = res.certificate->a0;
    out["separator"] = std::move(sep);
  }
  out["iterations"] = res.diagnostics.iterations;
  if (std::isfinite(res.diagnostics.grad_norm)) {
    out["grad_norm"] = res.diagnostics.grad_norm;
  }
  out["reduced_coordinates"] = res.diagnostics.reduced_coordinates;
  if (!res.diagnostics.witness.empty()) {
    const auto& w = res.diagnostics.witness;
    bool increasing = true;
    for (std::size_t i = 1; i < w.size(); ++i) increasing = increasing && w[i] > w[i - 1];
    ordered_json witness;
    witness["steps"] = static_cast<int>(w.size());
    witness["final"] = w.back();
    witness["strictly_increasing"] = increasing;
    out["witness"] = std::move(witness);
  }
  if (!res.diagnostics.lower_bounds.empty()) {
    const auto& lb = res.diagnostics.lower_bounds;
    ordered_json bounds;
    bounds["count"] = static_cast<int>(lb.size());
    bounds["first"] = lb.front();
    bounds["last"] = lb.back();
    out["lower_bounds"] = std::move(bounds);
  }
  return out;
}

int exit_code_for(const defexp::ConjugateResult& res) {
  return res.finite() ? kExitOk : kExitOutside;
}

int exit_code_for(defexp::errc kind) {
  switch (kind) {
    case defexp::errc::numerical:
    case defexp::errc::quadrature:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deformed exponential families on finite sample spaces"};
  app.set_version_flag("--version", std::string("defexp ") + defexp::kVersion + " (schema " +
                                        std::to_string(defexp::kSchemaVersion) + ")");
  app.require_subcommand(1);

  std::string model_path;
  OutputOptions output;
  std::string theta_text, eta_text, at_text, v_text, w_text, q_text, u_star_text, op_name;
  double tol = 1e-10;

  auto add_io = [&](CLI::App* cmd, bool needs_model = true) {
    if (needs_model) {
      cmd->add_option("--model", model_path, "model JSON file")->required();
    }
    cmd->add_option("--format", output.format, "output format (json|csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", output.out_path, "output file (default stdout)");
  };

  // deform eval
  auto* deform = app.add_subcommand("deform", "deformation calculus");
  auto* deform_eval = deform->add_subcommand("eval", "evaluate a deformation operation");
  add_io(deform_eval);
  deform_eval->add_option("--op", op_name, "phi|psi|ln-phi|exp-phi|d1|d2|self-dual")
      ->required()
      ->check(CLI::IsMember({"phi", "psi", "ln-phi", "exp-phi", "d1", "d2", "self-dual"}));
  deform_eval->add_option("--at", at_text, "comma-separated evaluation points")->required();
  deform_eval->add_option("--tol", tol, "tolerance for self-dual");

  // family ops
  auto* family = app.add_subcommand("family", "family operations");
  auto* fam_alpha = family->add_subcommand("alpha", "normalization constant");
  add_io(fam_alpha);
  fam_alpha->add_option("--theta", theta_text, "natural parameters")->required();
  auto* fam_density = family->add_subcommand("density", "model density at theta");
  add_io(fam_density);
  fam_density->add_option("--theta", theta_text, "natural parameters")->required();
  auto* fam_escort = family->add_subcommand("escort", "escort density at theta");
  add_io(fam_escort);
  fam_escort->add_option("--theta", theta_text, "natural parameters")->required();
  auto* fam_dk = family->add_subcommand("dk", "directional derivative of K");
  add_io(fam_dk);
  fam_dk->add_option("--theta", theta_text, "chart coefficients")->required();
  fam_dk->add_option("--v", v_text, "direction (statistic index or inline vector)")->required();
  auto* fam_d2k = family->add_subcommand("d2k", "second derivative of K");
  add_io(fam_d2k);
  fam_d2k->add_option("--theta", theta_text, "chart coefficients")->required();
  fam_d2k->add_option("--v", v_text, "first direction")->required();
  fam_d2k->add_option("--w", w_text, "second direction")->required();
  auto* fam_div = family->add_subcommand("divergence", "divergence of p from q");
  add_io(fam_div);
  fam_div->add_option("--q", q_text, "comparison density (values w.r.t. mu)")->required();

  // polytope ops
  auto* polytope = app.add_subcommand("polytope", "marginal polytope queries");
  auto* poly_contains = polytope->add_subcommand("contains", "membership with certificate");
  add_io(poly_contains);
  poly_contains->add_option("--eta", eta_text, "query point")->required();
  auto* poly_interior = polytope->add_subcommand("interior", "relative interior test");
  add_io(poly_interior);
  poly_interior->add_option("--eta", eta_text, "query point")->required();

  // conjugate ops
  auto* conjugate = app.add_subcommand("conjugate", "convex conjugates");
  auto* conj_star = conjugate->add_subcommand("alpha-star", "conjugate of alpha at eta");
  add_io(conj_star);
  conj_star->add_option("--eta", eta_text, "query point")->required();
  auto* conj_legendre =
      conjugate->add_subcommand("legendre-check", "Legendre identity round trip");
  add_io(conj_legendre);
  conj_legendre->add_option("--theta", theta_text, "natural parameters")->required();
  auto* conj_hv = conjugate->add_subcommand("hv", "conjugate of K over V");
  add_io(conj_hv);
  conj_hv->add_option("--u-star", u_star_text, "centered dual variable (one entry per point)")
      ->required();

  // check suite
  auto* check = app.add_subcommand("check", "self checks");
  auto* check_suite = check->add_subcommand("suite", "run the built-in property groups");
  add_io(check_suite, /*needs_model=*/false);

  // oracle-values
  auto* oracle_values =
      app.add_subcommand("oracle-values", "emit the oracle-computed fixture values");
  add_io(oracle_values, /*needs_model=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      return app.exit(e);
    }
    std::cerr << app.help() << std::endl;
    app.exit(e, std::cerr, std::cerr);
    return kExitValidation;
  }

  try {
    if (*oracle_values) {
      ordered_json parsed = ordered_json::parse(defexp::oracle::derived_values_json());
      write_result(parsed, output);
      return kExitOk;
    }
    if (*check_suite) {
      std::uint64_t seed = 20250810;
      if (const char* env = std::getenv("DEFEXP_SEED")) seed = std::strtoull(env, nullptr, 10);
      const auto groups = defexp::cli::run_check_suite(seed);
      ordered_json out;
      out["seed"] = seed;
      bool all_pass = true;
      ordered_json arr = ordered_json::array();
      for (const auto& g : groups) {
        ordered_json item;
        item["name"] = g.name;
        item["pass"] = g.pass;
        item["max_residual"] = g.max_residual;
        item["count"] = g.count;
        arr.push_back(std::move(item));
        all_pass = all_pass && g.pass;
      }
      out["groups"] = std::move(arr);
      out["pass"] = all_pass;
      write_result(out, output);
      return all_pass ? kExitOk : kExitNumerical;
    }

    const defexp::Model model = defexp::load_model_file(model_path);

    if (*deform_eval) {
      const Vector at = parse_vector(at_text, "--at");
      ordered_json out;
      out["op"] = op_name;
      out["at"] = defexp::to_json(at);
      if (op_name == "self-dual") {
        const auto report = model.deformation.is_self_dual(
            std::span<const double>(at.data(), static_cast<std::size_t>(at.size())), tol);
        out["self_dual"] = report.self_dual;
        out["max_deviation"] = report.max_deviation;
      } else {
        Vector values(at.size());
        for (int i = 0; i < at.size(); ++i) {
          if (op_name == "phi") values[i] = model.deformation.phi(at[i]);
          else if (op_name == "psi") values[i] = model.deformation.psi(at[i]);
          else if (op_name == "ln-phi") values[i] = model.deformation.ln_phi(at[i]);
          else if (op_name == "exp-phi") values[i] = model.deformation.exp_phi(at[i]);
          else if (op_name == "d1") values[i] = model.deformation.exp_phi_d1(at[i]);
          else values[i] = model.deformation.exp_phi_d2(at[i]);
        }
        out["values"] = defexp::to_json(values);
      }
      write_result(out, output);
      return kExitOk;
    }

    const defexp::PhiExponentialFamily fam = model.family();

    if (*fam_alpha) {
      ordered_json out;
      out["alpha"] = fam.alpha(parse_vector(theta_text, "--theta"));
      write_result(out, output);
      return kExitOk;
    }
    if (*fam_density) {
      ordered_json out;
      out["density"] = defexp::to_json(fam.density(parse_vector(theta_text, "--theta")).values);
      write_result(out, output);
      return kExitOk;
    }
    if (*fam_escort) {
      const auto chart = fam.theta_to_u(parse_vector(theta_text, "--theta"));
      ordered_json out;
      out["escort"] = defexp::to_json(fam.escort(chart.u.u).values);
      write_result(out, output);
      return kExitOk;
    }
    if (*fam_dk) {
      const auto chart = fam.theta_to_u(parse_vector(theta_text, "--theta"));
      const Vector v = parse_direction(v_text, fam, "--v");
      ordered_json out;
      out["dk"] = fam.dK(chart.u.u, v);
      write_result(out, output);
      return kExitOk;
    }
    if (*fam_d2k) {
      const auto chart = fam.theta_to_u(parse_vector(theta_text, "--theta"));
      const Vector v = parse_direction(v_text, fam, "--v");
      const Vector w = parse_direction(w_text, fam, "--w");
      ordered_json out;
      out["d2k"] = fam.d2K(chart.u.u, v, w);
      write_result(out, output);
      return kExitOk;
    }
    if (*fam_div) {
      const Vector q = parse_vector(q_text, "--q");
      ordered_json out;
      out["divergence"] = fam.divergence(fam.space().density(q));
      write_result(out, output);
      return kExitOk;
    }

    if (*poly_contains || *poly_interior) {
      const auto polytope_obj = defexp::MarginalPolytope::build(fam.statistics(), model.lp_tol);
      const Vector eta = parse_vector(eta_text, "--eta");
      if (*poly_contains) {
        const auto cert = polytope_obj.contains(eta);
        ordered_json out;
        if (is_member(cert)) {
          out["member"] = true;
          out["lambda"] = defexp::to_json(std::get<defexp::BarycentricWeights>(cert).lambda);
          write_result(out, output);
          return kExitOk;
        }
        const auto& sep = std::get<defexp::SeparationCertificate>(cert);
        out["member"] = false;
        ordered_json sep_json;
        sep_json["a"] = defexp::to_json(sep.a);
        sep_json["a0"] = sep.a0;
        out["separator"] = std::move(sep_json);
        write_result(out, output);
        return kExitOutside;
      }
      const auto interior = polytope_obj.relative_interior_contains(eta);
      ordered_json out;
      out["inside"] = interior.inside;
      out["slack"] = interior.slack;
      write_result(out, output);
      return interior.inside ? kExitOk : kExitOutside;
    }

    if (*conj_star) {
      const auto res = defexp::alpha_star(fam, parse_vector(eta_text, "--eta"),
                                          model.conjugate_options);
      write_result(conjugate_to_json(res), output);
      return exit_code_for(res);
    }
    if (*conj_legendre) {
      const auto report =
          defexp::legendre_check(fam, parse_vector(theta_text, "--theta"),
                                 model.conjugate_options);
      ordered_json out;
      out["eta"] = defexp::to_json(report.eta);
      out["theta_hat"] = defexp::to_json(report.theta_hat);
      out["alpha"] = report.alpha_theta;
      out["alpha_star"] = report.conjugate_value;
      if (!report.reduced_coordinates) out["theta_residual"] = report.theta_residual;
      out["value_residual"] = report.value_residual;
      out["reduced_coordinates"] = report.reduced_coordinates;
      out["ok"] = report.ok;
      write_result(out, output);
      return report.ok ? kExitOk : kExitNumerical;
    }
    if (*conj_hv) {
      const auto res =
          defexp::h_v(fam, parse_vector(u_star_text, "--u-star"), model.conjugate_options);
      ordered_json out = conjugate_to_json(res.conjugate);
      out["eta"] = defexp::to_json(res.eta);
      out["density_predicate"] = res.density_predicate;
      write_result(out, output);
      return exit_code_for(res.conjugate);
    }

    std::cerr << app.help() << std::endl;
    return kExitValidation;
  } catch (const defexp::error& e) {
    ordered_json envelope;
    ordered_json detail;
    detail["kind"] = defexp::errc_name(e.kind());
    detail["message"] = e.what();
    detail["path"] = e.path();
    envelope["error"] = std::move(detail);
    write_result(envelope, output);
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    ordered_json envelope;
    ordered_json detail;
    detail["kind"] = "internal";
    detail["message"] = e.what();
    detail["path"] = "";
    envelope["error"] = std::move(detail);
    write_result(envelope, output);
    return kExitNumerical;
  }
}
