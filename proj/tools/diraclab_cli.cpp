// diraclab command line: Clifford representation reports, local index
// computations with cross-checked oracles, spectral sweeps on S^1 and T^2,
// and the worked geometric examples. Machine-readable CSV/JSON out.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "diraclab/json_io.hpp"

namespace dl = diraclab;

namespace {

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::vector<double> parse_s_range(const std::string& text) {
  // "a:b:k" = k points log-spaced in [a, b]; a bare number is a single point
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw CLI::ValidationError("--s", "expected a single value or a:b:k");
  const double a = std::stod(text.substr(0, c1));
  const double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const int k = std::stoi(text.substr(c2 + 1));
  if (a <= 0 || b <= a || k < 2)
    throw CLI::ValidationError("--s", "need 0 < a < b and k >= 2");
  for (int i = 0; i < k; ++i)
    out.push_back(a * std::pow(b / a, static_cast<double>(i) / (k - 1)));
  return out;
}

dl::LinearPerturbation preset_perturbation(const std::string& name) {
  const dl::GradedModule forms = dl::de_rham_module(2);
  dl::LinearPerturbation p;
  p.n = 2;
  p.module = forms;
  p.basepoint = dl::RealVector::Zero(2);
  if (name == "de-rham-plus" || name == "de-rham-minus") {
    dl::RealMatrix v = dl::RealMatrix::Identity(2, 2);
    if (name == "de-rham-minus") v(1, 1) = -1.0;
    p.zs = dl::de_rham_perturbation(v);
    return p;
  }
  if (name == "degenerate") {
    p.zs = dl::de_rham_perturbation(dl::RealMatrix::Identity(2, 2));
    p.zs[1].setZero();
    return p;
  }
  if (name == "odd3") {
    // paired quaternionic blocks: the globally consistent odd configuration
    const dl::CliffordRep rep = dl::build_irreducible_rep(3);
    const dl::Complex i(0, 1);
    dl::Matrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, dl::Complex(0, -1), dl::Complex(0, 1), 0;
    s3 << 1, 0, 0, -1;
    std::vector<dl::Matrix> phis;
    for (const dl::Matrix& s : {s1, s2, s3}) {
      dl::Matrix paired = dl::Matrix::Zero(4, 4);
      paired.block(0, 0, 2, 2) = i * s;
      paired.block(2, 2, 2, 2) = -i * s;
      phis.push_back(paired);
    }
    return dl::build_odd(rep, 4, phis);
  }
  throw CLI::ValidationError("--preset", "unknown preset " + name);
}

std::string failing_condition(const dl::ProperReport& report) {
  if (!report.anticommutes) return "Z does not anticommute with the Clifford action";
  if (!report.rank_ok) return "module rank violates the admissibility constraint";
  return "proper singular point condition fails (Z(sigma) drops rank)";
}

int run_local_index(const dl::LinearPerturbation& p, const std::string& method,
                    bool cross_check, const std::string& out_path,
                    std::uint64_t seed) {
  const dl::ProperReport proper = dl::check_proper(p, 1000, seed);
  if (!proper.is_proper) {
    std::cerr << "precondition failed: " << failing_condition(proper) << "\n";
    return 3;
  }

  std::vector<dl::LocalIndexResult> results;
  auto run_eigenspace = [&]() {
    const auto norm = dl::normalize(p);
    results.push_back(dl::local_index_eigenspace(p.module, norm.zt));
  };
  auto run_hermite = [&]() {
    const auto norm = dl::normalize(p);
    results.push_back(dl::hermite_kernel_oracle(
        dl::ModelOperator::from_point(p.module, norm.zt)));
  };
  auto run_grid = [&]() {
    results.push_back(dl::fredholm_index_oracle(p.module, p.zs));
  };

  if (cross_check) {
    if (proper.scalar_square) {
      run_eigenspace();
      run_hermite();
    }
    if (p.n <= 2) run_grid();
    if (results.empty()) {
      std::cerr << "precondition failed: no eligible method for this spec\n";
      return 3;
    }
    for (const auto& r : results) {
      if (r.index != results.front().index ||
          r.dim_ker_plus != results.front().dim_ker_plus ||
          r.dim_ker_minus != results.front().dim_ker_minus) {
        std::cerr << "cross-check disagreement between methods\n";
        return 1;
      }
    }
  } else if (method == "eigenspace") {
    run_eigenspace();
  } else if (method == "hermite") {
    run_hermite();
  } else if (method == "grid") {
    run_grid();
  } else {  // auto
    if (proper.scalar_square)
      run_eigenspace();
    else
      run_grid();
  }

  dl::Json out = dl::result_to_json(results.front());
  out["seed"] = seed;
  if (cross_check) {
    dl::Json all = dl::Json::array();
    for (const auto& r : results) all.push_back(dl::to_string(r.method));
    out["cross_checked"] = all;
  }
  write_output(out_path, out.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirac operator perturbation toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = dl::kDefaultSeed;
  app.add_option("--seed", seed, "seed for all sampling");

  // clifford
  auto* cmd_clifford = app.add_subcommand("clifford", "build a Clifford representation and report its invariants");
  int cl_n = 0;
  bool cl_json = false;
  std::string cl_out;
  cmd_clifford->add_option("-n", cl_n, "ambient dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_clifford->add_flag("--json", cl_json, "emit the full representation");
  cmd_clifford->add_option("-o,--out", cl_out, "output path");

  // local-index
  auto* cmd_local = app.add_subcommand("local-index", "local index of a perturbation spec");
  std::string li_spec, li_preset, li_method = "auto", li_out;
  bool li_cross = false;
  cmd_local->add_option("spec", li_spec, "perturbation JSON file");
  cmd_local->add_option("--preset", li_preset,
                        "built-in spec: de-rham-plus|de-rham-minus|odd3|degenerate");
  cmd_local->add_option("--method", li_method, "eigenspace|hermite|grid|auto")
      ->check(CLI::IsMember({"eigenspace", "hermite", "grid", "auto"}));
  cmd_local->add_flag("--cross-check", li_cross, "run all eligible methods");
  cmd_local->add_option("-o,--out", li_out, "output path");

  // spectrum
  auto* cmd_spectrum = app.add_subcommand("spectrum", "spectral sweeps on S^1 and T^2");
  std::string sp_kind, sp_range = "1", sp_out, sp_summary, sp_field = "standard";
  int sp_modes = 64;
  cmd_spectrum->add_option("kind", sp_kind, "circle-counterexample|circle-morse|torus-field")
      ->required()
      ->check(CLI::IsMember({"circle-counterexample", "circle-morse", "torus-field"}));
  cmd_spectrum->add_option("--s", sp_range, "s value or a:b:k (k log-spaced points)");
  cmd_spectrum->add_option("--N", sp_modes, "Fourier mode cutoff");
  cmd_spectrum->add_option("--field", sp_field, "torus field: standard|constant");
  cmd_spectrum->add_option("-o,--out", sp_out, "CSV output path");
  cmd_spectrum->add_option("--summary", sp_summary, "JSON summary path");

  // examples
  auto* cmd_examples = app.add_subcommand("examples", "worked geometric examples");
  cmd_examples->require_subcommand(1);
  auto* cmd_ph = cmd_examples->add_subcommand("poincare-hopf", "vector field index sum");
  std::string ph_preset, ph_spec, ph_out;
  cmd_ph->add_option("--preset", ph_preset, "sphere|torus");
  cmd_ph->add_option("--spec", ph_spec, "VectorFieldSpec JSON file");
  cmd_ph->add_option("-o,--out", ph_out, "output path");
  auto* cmd_pin = cmd_examples->add_subcommand("pin-sphere", "pin bundle section on S^2m");
  int pin_m = 1;
  std::string pin_out;
  cmd_pin->add_option("-m", pin_m, "half dimension")->required()->check(CLI::PositiveNumber);
  cmd_pin->add_option("-o,--out", pin_out, "output path");
  auto* cmd_sub = cmd_examples->add_subcommand("submanifold", "odd-codimension vanishing");
  int sub_tangent = 2, sub_normal = 1;
  double sub_scale = 1.0;
  std::string sub_out;
  cmd_sub->add_option("--tangent", sub_tangent, "submanifold dimension");
  cmd_sub->add_option("--normal", sub_normal, "normal bundle rank (odd)");
  cmd_sub->add_option("--scale", sub_scale, "volume element scale");
  cmd_sub->add_option("-o,--out", sub_out, "output path");
  auto* cmd_wd = cmd_examples->add_subcommand("pin-well-defined", "factorization independence of the pin index");
  std::string wd_spec, wd_out;
  int wd_trials = 20;
  cmd_wd->add_option("--spec", wd_spec, "PinZeroSpec JSON file")->required();
  cmd_wd->add_option("--trials", wd_trials, "random refactorizations");
  cmd_wd->add_option("-o,--out", wd_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_clifford->parsed()) {
      const dl::CliffordRep rep = dl::build_irreducible_rep(cl_n);
      const dl::RepInvariantReport report = dl::check_rep_invariants(rep);
      dl::Json out{{"n", rep.n},
                   {"dim", rep.dim},
                   {"max_residual", report.max()},
                   {"clifford_residual", report.clifford},
                   {"skew_adjoint_residual", report.skew_adjoint},
                   {"chirality_residual", report.chirality_def},
                   {"seed", seed}};
      if (cl_json) {
        dl::Json gens = dl::Json::array();
        for (const auto& g : rep.generators) gens.push_back(dl::matrix_to_json(g));
        out["generators"] = gens;
        out["chirality"] = dl::matrix_to_json(rep.chirality);
      }
      write_output(cl_out, out.dump(2));
      return report.max() <= 1e-12 ? 0 : 1;
    }

    if (cmd_local->parsed()) {
      if (li_spec.empty() == li_preset.empty()) {
        std::cerr << "local-index: give exactly one of SPEC or --preset\n";
        return 2;
      }
      dl::LinearPerturbation p;
      if (!li_preset.empty()) {
        p = preset_perturbation(li_preset);
      } else {
        std::ifstream in(li_spec);
        if (!in) {
          std::cerr << "cannot read " << li_spec << "\n";
          return 2;
        }
        p = dl::perturbation_from_json(dl::Json::parse(in));
      }
      return run_local_index(p, li_method, li_cross, li_out, seed);
    }

    if (cmd_spectrum->parsed()) {
      const std::vector<double> svals = parse_s_range(sp_range);
      std::vector<dl::SpectrumResult> sweep;
      for (double s : svals) {
        if (sp_kind == "circle-counterexample")
          sweep.push_back(dl::circle_counterexample(s, sp_modes));
        else if (sp_kind == "circle-morse")
          sweep.push_back(dl::circle_morse_witten(s, sp_modes));
        else {
          const dl::TrigField2 field = sp_field == "constant"
                                           ? dl::TrigField2::constant(1.0, 0.0)
                                           : dl::TrigField2::standard();
          sweep.push_back(dl::torus_de_rham_index(field, s, sp_modes));
        }
      }
      write_output(sp_out, dl::spectrum_to_csv(sweep));
      if (!sp_summary.empty()) {
        dl::Json summary = dl::Json::array();
        for (const auto& res : sweep)
          summary.push_back(dl::spectrum_summary_to_json(res));
        dl::Json out{{"kind", sp_kind}, {"seed", seed}, {"points", summary}};
        if (sp_kind == "circle-morse" && sweep.size() >= 3) {
          const auto fit = dl::cluster_report(sweep, dl::circle_morse_model(5.0));
          out["cluster_fit"] = dl::cluster_fit_to_json(fit);
        }
        write_output(sp_summary, out.dump(2));
      }
      return 0;
    }

    if (cmd_ph->parsed()) {
      dl::VectorFieldSpec spec;
      if (!ph_preset.empty()) {
        if (ph_preset == "sphere")
          spec = dl::VectorFieldSpec::sphere_preset();
        else if (ph_preset == "torus")
          spec = dl::VectorFieldSpec::torus_preset();
        else {
          std::cerr << "unknown preset " << ph_preset << "\n";
          return 2;
        }
      } else if (!ph_spec.empty()) {
        std::ifstream in(ph_spec);
        if (!in) {
          std::cerr << "cannot read " << ph_spec << "\n";
          return 2;
        }
        spec = dl::vector_field_from_json(dl::Json::parse(in));
      } else {
        std::cerr << "poincare-hopf: need --preset or --spec\n";
        return 2;
      }
      const dl::PoincareHopfResult result = dl::poincare_hopf(spec);
      dl::Json out{{"per_zero", result.per_zero}, {"chi", result.chi}, {"seed", seed}};
      write_output(ph_out, out.dump(2));
      return 0;
    }

    if (cmd_pin->parsed()) {
      const dl::PinSphereResult result = dl::pin_sphere_indices(pin_m);
      dl::Json out{{"m", pin_m},
                   {"per_zero", result.per_zero},
                   {"total", result.total},
                   {"seed", seed}};
      write_output(pin_out, out.dump(2));
      return 0;
    }

    if (cmd_sub->parsed()) {
      const dl::SubmanifoldReport report =
          dl::submanifold_vanishing(sub_tangent, sub_normal, sub_scale);
      dl::Json out{{"hermitian_residual", report.hermitian_residual},
                   {"min_singular_value", report.min_singular_value},
                   {"anticommute_residual", report.anticommute_residual},
                   {"index", report.index},
                   {"ok", report.ok},
                   {"seed", seed}};
      write_output(sub_out, out.dump(2));
      return report.ok ? 0 : 1;
    }

    if (cmd_wd->parsed()) {
      std::ifstream in(wd_spec);
      if (!in) {
        std::cerr << "cannot read " << wd_spec << "\n";
        return 2;
      }
      const dl::PinZeroSpec spec = dl::pin_zero_from_json(dl::Json::parse(in));
      const bool stable = dl::pin_index_well_defined_check(spec, wd_trials, seed);
      dl::Json out{{"stable", stable}, {"trials", wd_trials}, {"seed", seed}};
      write_output(wd_out, out.dump(2));
      return stable ? 0 : 1;
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const dl::precondition_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  } catch (const dl::inconclusive_gap_error& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
