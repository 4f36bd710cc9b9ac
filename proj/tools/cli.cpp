#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "projgeom/algebra.hpp"
#include "projgeom/chart_file.hpp"
#include "projgeom/connection.hpp"
#include "projgeom/develop.hpp"
#include "projgeom/error.hpp"
#include "projgeom/projective.hpp"
#include "projgeom/random.hpp"
#include "projgeom/reps.hpp"
#include "projgeom/twistor.hpp"

namespace projgeom::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string point;
  std::string alpha_path;
  std::string targets_path;
  std::string base;
  std::size_t samples = 10;
  double tol = 1e-9;
  double h = 1e-4;
  std::uint64_t seed = 0;
  bool json = false;
  bool assert_flat = false;
  std::string output;
  std::size_t dim = 0;
  std::string space;
};

struct Outcome {
  ojson report;
  int code = 0;
};

// Results land in input order whatever the completion order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
  std::vector<T> out(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) out[i] = f(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

std::vector<std::vector<double>> sample_points(const ConnectionSpec& spec, std::size_t count, std::uint64_t seed) {
  double lo = -0.5, hi = 0.5;
  if (spec.domain()) {
    const double w = spec.domain()->second - spec.domain()->first;
    lo = spec.domain()->first + 0.1 * w;
    hi = spec.domain()->second - 0.1 * w;
  }
  Rng rng(seed);
  std::vector<std::vector<double>> pts(count, std::vector<double>(spec.dim()));
  for (auto& p : pts)
    for (double& x : p) x = rng.uniform(lo, hi);
  return pts;
}

std::vector<double> point_in_chart(const ConnectionSpec& spec, const std::string& text, const char* flag) {
  if (text.empty()) throw CLI::RequiredError(flag);
  std::vector<double> p = parse_point(text, spec.dim());
  if (!spec.in_domain(p)) throw Error(ErrorKind::DomainError, std::string(flag) + " lies outside the chart domain box");
  return p;
}

ojson header(const RunConfig& cfg) {
  ojson j;
  j["schema"] = 1;
  j["command"] = cfg.command;
  return j;
}

Outcome do_analyze(const RunConfig& cfg, bool cotton_only) {
  const ConnectionSpec spec = load_chart(cfg.inputs.at(0));
  const std::vector<double> p = point_in_chart(spec, cfg.point, "--point");
  const CurvatureReport rep = curvature_report(evaluate(spec, p, Derivatives::Second), cfg.tol);
  Outcome o{header(cfg)};
  o.report["chart"] = cfg.inputs[0];
  o.report["n"] = rep.n;
  o.report["point"] = rep.point;
  o.report["verdict"] = rep.verdict;
  o.report["projectively_flat"] = rep.projectively_flat ? ojson(*rep.projectively_flat) : ojson();
  ojson norms;
  if (!cotton_only) {
    norms["T"] = norm(rep.T);
    norms["R"] = norm(rep.R);
    norms["r"] = norm(rep.r);
    norms["s"] = norm(rep.s);
    if (rep.W) norms["W"] = norm(*rep.W);
    if (rep.Q) norms["Q"] = norm(*rep.Q);
    if (rep.F) norms["F"] = norm(*rep.F);
  }
  if (rep.C) norms["C"] = norm(*rep.C);
  o.report["norms"] = norms;
  if (!cotton_only) {
    ojson res;
    bool bad = false;
    for (const auto& [k, v] : rep.residuals) {
      res[k] = v;
      if (k != "torsion" && v > cfg.tol) bad = true;
    }
    o.report["residuals"] = res;
    if (bad) o.code = 1;
  }
  ojson tensors;
  if (rep.C) tensors["C"] = nlohmann::json(*rep.C);
  if (!cotton_only) {
    tensors["R"] = nlohmann::json(rep.R);
    tensors["r"] = nlohmann::json(rep.r);
    tensors["s"] = nlohmann::json(rep.s);
    if (rep.W) tensors["W"] = nlohmann::json(*rep.W);
    if (rep.Q) tensors["Q"] = nlohmann::json(*rep.Q);
    if (rep.F) tensors["F"] = nlohmann::json(*rep.F);
  }
  o.report["tensors"] = tensors;
  if (cfg.assert_flat && rep.projectively_flat != true) o.code = 1;
  return o;
}

Outcome do_invariance(const RunConfig& cfg) {
  const ConnectionSpec spec = load_chart(cfg.inputs.at(0));
  if (cfg.alpha_path.empty()) throw CLI::RequiredError("--alpha");
  const OneFormField alpha = load_alpha(cfg.alpha_path, spec.dim());
  const auto pts = sample_points(spec, cfg.samples, cfg.seed);
  const auto per = parallel_map<InvarianceResult>(pts.size(), [&](std::size_t i) {
    return check_weyl_invariance(spec, alpha, {pts[i]});
  });
  Outcome o{header(cfg)};
  double w = 0.0;
  std::optional<double> c;
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w = std::max(w, per[i].weyl_residual);
    ojson row;
    row["point"] = pts[i];
    row["weyl_residual"] = per[i].weyl_residual;
    if (per[i].cotton_residual) {
      c = std::max(c.value_or(0.0), *per[i].cotton_residual);
      row["cotton_residual"] = *per[i].cotton_residual;
    }
    rows.push_back(row);
  }
  o.report["chart"] = cfg.inputs[0];
  o.report["samples"] = cfg.samples;
  o.report["seed"] = cfg.seed;
  o.report["weyl_residual"] = w;
  if (c) o.report["cotton_residual"] = *c;
  const bool ok = w <= cfg.tol && (!c || *c <= cfg.tol);
  o.report["verdict"] = ok ? "invariant at all samples" : "residual exceeds tolerance";
  o.report["points"] = rows;
  o.code = ok ? 0 : 1;
  return o;
}

Outcome do_equivalent(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) throw CLI::ValidationError("equivalent", "needs two chart files");
  const ConnectionSpec a = load_chart(cfg.inputs[0]);
  const ConnectionSpec b = load_chart(cfg.inputs[1]);
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "charts of different dimension");
  const auto pts = sample_points(a, cfg.samples, cfg.seed);
  const EquivalenceVerdict v = projectively_equivalent(a, b, pts, cfg.tol);
  Outcome o{header(cfg)};
  o.report["charts"] = cfg.inputs;
  o.report["samples"] = cfg.samples;
  o.report["seed"] = cfg.seed;
  o.report["equivalent"] = v.equivalent;
  o.report["marginal"] = v.marginal;
  o.report["max_residual"] = v.max_residual;
  o.report["verdict"] = v.equivalent ? "projectively equivalent" : "not projectively equivalent";
  if (v.witness) o.report["witness"] = nlohmann::json(*v.witness);
  if (a.dim() % 2 == 0) {
    const auto js = sample_complex_structures(a.dim(), 10, cfg.seed);
    const TwistorVerdict t = same_twistor_structure(a, b, pts, js, cfg.tol);
    o.report["same_twistor_structure"] = t.same;
    o.report["twistor_residual"] = t.max_residual;
  }
  ojson alphas = ojson::array();
  for (std::size_t i = 0; i < pts.size(); ++i) alphas.push_back({{"point", pts[i]}, {"alpha", v.alphas[i]}});
  o.report["alphas"] = alphas;
  o.code = v.equivalent ? 0 : 1;
  return o;
}

Outcome do_twistor(const RunConfig& cfg) {
  ConnectionSpec spec = load_chart(cfg.inputs.at(0));
  if (spec.dim() % 2 != 0) throw Error(ErrorKind::OddDimension, "twistor space needs even n");
  const auto xs = sample_points(spec, cfg.samples, cfg.seed);
  Outcome o{header(cfg)};
  o.report["chart"] = cfg.inputs[0];
  o.report["samples"] = cfg.samples;
  o.report["seed"] = cfg.seed;
  o.report["h"] = cfg.h;
  const TorsionRemoval tr = remove_torsion(spec, xs);
  if (!tr.ok) {
    throw Error(ErrorKind::HasTorsion, "torsion is not pure trace (|T1| = " + std::to_string(tr.t1_norm) + ")");
  }
  o.report["torsion_removed"] = norm(torsion(evaluate(spec, xs.front(), Derivatives::None))) > 0.0;
  spec = *tr.spec;
  const auto tps = sample_twistor_points(xs, cfg.seed);
  const auto res = parallel_map<double>(tps.size(), [&](std::size_t i) { return nijenhuis(spec, tps[i], {}, cfg.h); });
  ojson rows = ojson::array();
  bool all = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < tps.size(); ++i) {
    const Integrability v = classify_nijenhuis(res[i]);
    all = all && v == Integrability::Integrable;
    worst = std::max(worst, res[i]);
    nlohmann::json w = Witness{tps[i].x, tps[i].j, res[i]};
    ojson row;
    row["point"] = tps[i].x;
    row["j"] = w["j"];
    row["residual"] = res[i];
    row["verdict"] = to_string(v);
    rows.push_back(row);
  }
  o.report["max_residual"] = worst;
  o.report["verdict"] = all ? "integrable at all samples" : to_string(classify_nijenhuis(worst));
  o.report["points"] = rows;
  o.code = all ? 0 : 1;
  return o;
}

Outcome do_reps(const RunConfig& cfg) {
  if (cfg.space != "torsion" && cfg.space != "curvature") {
    throw CLI::ValidationError("--space", "must be torsion or curvature");
  }
  const Space space = cfg.space == "torsion" ? Space::Torsion : Space::Curvature;
  const auto comps = j0_census(space, cfg.dim);
  Outcome o{header(cfg)};
  o.report["dim"] = cfg.dim;
  o.report["space"] = cfg.space;
  std::size_t total = 0;
  bool ok = true;
  ojson rows = ojson::array();
  for (const auto& c : comps) {
    ojson row;
    row["name"] = c.name;
    row["label"] = weight_label(c.highest_weight);
    row["dim"] = c.dim;
    row["weyl_dim"] = c.expected_dim;
    ojson spec = ojson::object();
    for (const auto& [k, m] : c.spectrum) spec[std::to_string(k) + "i"] = m;
    row["spectrum"] = spec;
    rows.push_back(row);
    total += c.dim;
    ok = ok && c.dim == c.expected_dim;
  }
  o.report["components"] = rows;
  o.report["total_dim"] = total;
  o.code = ok ? 0 : 1;
  return o;
}

Outcome do_develop(const RunConfig& cfg) {
  const ConnectionSpec spec = load_chart(cfg.inputs.at(0));
  const std::vector<double> base = point_in_chart(spec, cfg.base, "--base");
  if (cfg.targets_path.empty()) throw CLI::RequiredError("--targets");
  const auto targets = load_points(cfg.targets_path, spec.dim());
  Outcome o{header(cfg)};
  o.report["chart"] = cfg.inputs[0];
  o.report["base"] = base;
  try {
    const auto dev = develop_map(spec, base, targets, cfg.tol, cfg.seed);
    ojson rows = ojson::array();
    double worst = 0.0;
    for (const auto& d : dev) {
      ojson row;
      row["target"] = d.target;
      row["homogeneous"] = std::vector<double>(d.image.homogeneous.data(),
                                               d.image.homogeneous.data() + d.image.homogeneous.size());
      row["path_error"] = d.path_error;
      worst = std::max(worst, d.path_error);
      rows.push_back(row);
    }
    o.report["verdict"] = "flat: developing map computed";
    o.report["max_path_error"] = worst;
    o.report["points"] = rows;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotFlat) throw;
    o.report["verdict"] = "NotFlat";
    o.report["holonomy"] = holonomy_check(spec, base, cfg.seed);
    o.code = 1;
  }
  return o;
}

bool is_tensor_payload(const ojson& j) { return j.is_object() && j.contains("data") && j.contains("variance"); }

void render_text(const ojson& j, const std::string& prefix, std::ostream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const ojson& v = it.value();
    if (it.key() == "tensors") continue;
    if (v.is_object()) {
      render_text(v, key, out);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t i = 0; i < v.size(); ++i) render_text(v[i], key + "[" + std::to_string(i) + "]", out);
    } else if (!is_tensor_payload(v)) {
      out << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"projective differential geometry toolkit", "projgeom"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* s) {
    s->add_flag("--json", cfg.json, "emit JSON");
    s->add_option("--output,-o", cfg.output, "write the report to a file");
  };

  auto* analyze = app.add_subcommand("analyze", "curvature report at a point");
  analyze->add_option("chart", cfg.inputs, "chart file")->required()->expected(1);
  analyze->add_option("--point", cfg.point, "a,b,...")->required();
  analyze->add_flag("--assert-flat", cfg.assert_flat, "exit 1 unless projectively flat");
  common(analyze);

  auto* cottonc = app.add_subcommand("cotton", "Cotton tensor at a point");
  cottonc->add_option("chart", cfg.inputs, "chart file")->required()->expected(1);
  cottonc->add_option("--point", cfg.point, "a,b,...")->required();
  common(cottonc);

  auto* inv = app.add_subcommand("invariance", "W (and C for n=2) under a projective change");
  inv->add_option("chart", cfg.inputs, "chart file")->required()->expected(1);
  inv->add_option("--alpha", cfg.alpha_path, "1-form file")->required();
  inv->add_option("--samples", cfg.samples, "number of random points")->check(CLI::PositiveNumber);
  inv->add_option("--seed", cfg.seed, "random seed");
  common(inv);

  auto* eq = app.add_subcommand("equivalent", "projective equivalence of two charts");
  eq->add_option("charts", cfg.inputs, "two chart files")->required()->expected(2);
  eq->add_option("--samples", cfg.samples, "number of random points")->check(CLI::PositiveNumber);
  eq->add_option("--seed", cfg.seed, "random seed");
  common(eq);

  auto* tw = app.add_subcommand("twistor", "Nijenhuis tensor of the twistor structure");
  tw->set_help_flag("--help", "print this help message and exit");
  tw->add_option("chart", cfg.inputs, "chart file")->required()->expected(1);
  tw->add_option("--samples", cfg.samples, "number of twistor points")->check(CLI::PositiveNumber);
  tw->add_option("--h", cfg.h, "finite-difference step")->check(CLI::PositiveNumber);
  tw->add_option("--seed", cfg.seed, "random seed");
  common(tw);

  auto* rp = app.add_subcommand("reps", "component table with j0 spectra");
  rp->add_option("--dim", cfg.dim, "even n <= 6")->required();
  rp->add_option("--space", cfg.space, "torsion|curvature")->required();
  common(rp);

  auto* dv = app.add_subcommand("develop", "developing map into RP^n");
  dv->add_option("chart", cfg.inputs, "chart file")->required()->expected(1);
  dv->add_option("--base", cfg.base, "a,b,...")->required();
  dv->add_option("--targets", cfg.targets_path, "file of target points")->required();
  dv->add_option("--seed", cfg.seed, "random seed");
  common(dv);

  analyze->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  cottonc->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  inv->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  eq->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  dv->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  Outcome o;
  try {
    if (*analyze) {
      cfg.command = "analyze";
      o = do_analyze(cfg, false);
    } else if (*cottonc) {
      cfg.command = "cotton";
      o = do_analyze(cfg, true);
    } else if (*inv) {
      cfg.command = "invariance";
      o = do_invariance(cfg);
    } else if (*eq) {
      cfg.command = "equivalent";
      if (!eq->count("--tol")) cfg.tol = 1e-8;
      o = do_equivalent(cfg);
    } else if (*tw) {
      cfg.command = "twistor";
      o = do_twistor(cfg);
    } else if (*rp) {
      cfg.command = "reps";
      o = do_reps(cfg);
    } else if (*dv) {
      cfg.command = "develop";
      if (!dv->count("--tol")) cfg.tol = 1e-7;
      o = do_develop(cfg);
    }
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::ostringstream text;
  if (cfg.json) {
    text << o.report.dump(2) << "\n";
  } else {
    render_text(o.report, "", text);
  }
  if (!cfg.output.empty()) {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << cfg.output << "\n";
      return 2;
    }
    f << text.str();
  } else {
    out << text.str();
  }
  return o.code;
}

}  // namespace projgeom::cli
