// squeezest: command-line front end for squeezing-parameter estimation.
//
// Subcommands write a data file (CSV, or JSON with --format json) plus a JSON
// sidecar with the same basename holding the fully resolved configuration and
// summary values. Exit codes: 0 ok, 2 input validation, 3 numerical quality,
// 4 I/O.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "squeezest/squeezest.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace squeezest;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct RunConfig {
  std::string state = "vacuum";
  double alpha = 0.0;
  double alpha_im = 0.0;
  double z = 0.0;
  std::string wavefunction_path;
  std::optional<double> lambda_halfwidth;
  std::size_t n_lambda = std::size_t{1} << 14;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<std::size_t> n_t;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

struct Source {
  std::optional<GaussianPureState> gaussian;
  std::optional<WavefunctionGrid> grid;

  const WavefunctionGrid& psi() {
    if (!grid) grid = wavefunction(*gaussian);
    return *grid;
  }
  CharFn chi() const {
    if (gaussian) {
      auto s = *gaussian;
      return [s](double l) { return char_fn_analytic(s, l); };
    }
    const WavefunctionGrid* p = &*grid;
    return [p](double l) { return char_fn_numeric(*p, l); };
  }
};

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string("--") + name + " must be positive and finite");
}

void validate(const RunConfig& c) {
  if (c.lambda_halfwidth) require_positive(*c.lambda_halfwidth, "lambda-halfwidth");
  if (c.n_lambda == 0) throw ValidationError("--n-lambda must be positive");
  if (c.n_t && *c.n_t < 2) throw ValidationError("--n-t must be at least 2");
  if (c.t_min.has_value() != c.t_max.has_value())
    throw ValidationError("--t-min and --t-max must be given together");
  if (c.t_min && !(*c.t_min < *c.t_max)) throw ValidationError("--t-min must be below --t-max");
  if (c.out.empty()) throw ValidationError("--out is required");
}

Source make_source(const RunConfig& c) {
  Source s;
  if (c.state == "file") {
    if (c.wavefunction_path.empty())
      throw ValidationError("--state file requires --wavefunction PATH");
    s.grid = io::read_wavefunction_csv(c.wavefunction_path);
    return s;
  }
  GaussianPureState g;
  if (c.state == "vacuum") {
    g = GaussianPureState::vacuum();
  } else if (c.state == "coherent") {
    g = GaussianPureState::coherent({c.alpha, c.alpha_im});
  } else if (c.state == "squeezed") {
    g = GaussianPureState::squeezed_vacuum(c.z);
  } else {
    g = {{c.alpha, c.alpha_im}, c.z};
  }
  g.validate();
  s.gaussian = g;
  return s;
}

CharFnOptions spectral_options(const RunConfig& c) {
  CharFnOptions o;
  o.lambda_halfwidth = c.lambda_halfwidth;
  o.n_lambda = c.n_lambda;
  return o;
}

std::optional<GridSpec> window_override(const RunConfig& c, const GridSpec& fallback) {
  if (!c.t_min && !c.n_t) return std::nullopt;
  GridSpec g = fallback;
  if (c.t_min) {
    g.lo = *c.t_min;
    g.hi = *c.t_max;
  }
  if (c.n_t) g.n = *c.n_t;
  return g;
}

json grid_json(const GridSpec& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"n", g.n}}; }

json config_json(const std::string& command, const RunConfig& c) {
  json j;
  j["command"] = command;
  j["state"] = c.state;
  if (c.state == "file") {
    j["wavefunction"] = c.wavefunction_path;
  } else {
    j["alpha"] = c.alpha;
    j["alpha_im"] = c.alpha_im;
    j["z"] = c.z;
  }
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

std::string sidecar_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".json");
  if (p.string() == out) p = std::filesystem::path(out + ".meta.json");
  return p.string();
}

void write_json(const std::string& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

// Writes the data table and its sidecar, or one combined JSON document.
void emit(const RunConfig& c, const io::Table& table, json meta) {
  if (c.format == "json") {
    json data;
    for (std::size_t k = 0; k < table.header.size(); ++k) data[table.header[k]] = table.columns[k];
    meta["data"] = std::move(data);
    write_json(c.out, meta);
    return;
  }
  io::write_text(c.out, io::to_csv(table));
  meta["data_file"] = std::filesystem::path(c.out).filename().string();
  write_json(sidecar_path(c.out), meta);
}

json spectral_meta_json(const SpectralDensity& g) {
  const auto& m = g.metadata();
  json j;
  j["route"] = m.route;
  if (m.route == "charfn") {
    j["lambda_halfwidth"] = m.lambda_halfwidth;
    j["n_lambda"] = m.n_lambda;
  }
  j["clamped"] = m.clamped;
  j["noise_floor"] = m.noise_floor;
  j["max_imag_residue"] = m.max_imag_residue;
  j["normalization"] = m.normalization;
  j["mu_grid"] = grid_json(g.grid());
  return j;
}

json summary_json(const ShiftDistribution& d) {
  const auto& s = d.summary();
  return {{"frame", to_string(d.frame())}, {"reference", d.reference()}, {"mean", s.mean},
          {"mode", s.mode},  {"rmse", s.rmse},  {"captured", s.captured},
          {"t_grid", grid_json(d.grid())}};
}

SpectralDensity compute_spectral(const RunConfig& c, Source& src, bool oracle) {
  const auto opts = spectral_options(c);
  auto charfn = src.gaussian ? spectral_density(*src.gaussian, opts)
                             : spectral_density_from_charfn(src.chi(), opts);
  if (!oracle) return charfn;
  return spectral_density_via_mellin(src.psi(), charfn.grid());
}

ShiftDistribution compute_distribution(const RunConfig& c, Source& src, const std::string& strategy,
                                       double r_true) {
  if (strategy == "optimal") {
    const auto g = compute_spectral(c, src, false);
    return optimal_distribution(g, window_override(c, default_error_window(g)));
  }
  const auto& psi = src.psi();
  const GridSpec w = default_lnx_window(psi);
  auto grid = window_override(c, w);
  GridSpec rg = grid.value_or(w);
  rg.lo += r_true;
  rg.hi += r_true;
  return lnx_distribution(psi, r_true, rg);
}

io::Table distribution_table(const ShiftDistribution& d) {
  io::Table t{{"t", "p"}, {d.grid().points(), d.values()}};
  if (d.frame() == Frame::absolute) t.header[0] = "rhat";
  return t;
}

ShiftDistribution read_distribution(const std::string& path) {
  const auto text = io::read_text(path);
  const std::string side = sidecar_path(path);
  json meta = json::parse(io::read_text(side), nullptr, false);
  if (meta.is_discarded() || !meta.contains("summary"))
    throw ValidationError("distribution sidecar '" + side + "' is missing or malformed");
  const auto frame = meta["summary"].value("frame", std::string("error"));
  const bool absolute = frame == "absolute";
  const auto t = io::parse_csv(text, {absolute ? "rhat" : "t", "p"}, "distribution file");
  const GridSpec g = io::uniform_grid_from(t.columns[0], "distribution file");
  return ShiftDistribution(g, t.columns[1], absolute ? Frame::absolute : Frame::error,
                           meta["summary"].value("reference", 0.0));
}

CostFunction read_holevo_table(const std::string& path) {
  const auto t = io::parse_csv(io::read_text(path), {"mu", "a"}, "holevo table");
  return CostFunction::holevo({io::uniform_grid_from(t.columns[0], "holevo table"), t.columns[1]});
}

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--state", c.state, "Input state family")
      ->check(CLI::IsMember({"vacuum", "coherent", "squeezed", "displaced-squeezed", "file"}))
      ->capture_default_str();
  app->add_option("--alpha", c.alpha, "Real part of the displacement");
  app->add_option("--alpha-im", c.alpha_im, "Imaginary part of the displacement");
  app->add_option("--z", c.z, "Squeeze parameter of the input state");
  app->add_option("--wavefunction", c.wavefunction_path, "CSV (x,re_psi,im_psi) for --state file");
  app->add_option("--lambda-halfwidth", c.lambda_halfwidth, "Truncation half-width of the lambda integral");
  app->add_option("--n-lambda", c.n_lambda, "Number of lambda samples (power of two)")->capture_default_str();
  app->add_option("--t-min", c.t_min, "Lower edge of the error window");
  app->add_option("--t-max", c.t_max, "Upper edge of the error window");
  app->add_option("--n-t", c.n_t, "Points in the error window");
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--out", c.out, "Output file");
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

json state_json(const Source& src) {
  if (!src.gaussian) return {{"kind", "grid"}};
  return {{"alpha", src.gaussian->alpha.real()},
          {"alpha_im", src.gaussian->alpha.imag()},
          {"z", src.gaussian->z},
          {"mean_photon_number", mean_photon_number(*src.gaussian)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal estimation of a squeezing parameter"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* spectral = app.add_subcommand("spectral", "Spectral density g(mu) of the squeezing generator");
  bool oracle = false;
  add_common(spectral, cfg);
  spectral->add_flag("--oracle", oracle, "Use the Mellin route instead of the characteristic function");

  auto* dist = app.add_subcommand("dist", "Estimation error distribution");
  std::string strategy = "optimal";
  double r_true = 0.0;
  add_common(dist, cfg);
  dist->add_option("--strategy", strategy)->check(CLI::IsMember({"optimal", "lnx"}))->capture_default_str();
  dist->add_option("--r-true", r_true, "True squeezing (lnx strategy, absolute frame)");
  std::string frame;
  dist->add_option("--frame", frame, "Output frame; lnx defaults to absolute, optimal is always error")
      ->check(CLI::IsMember({"error", "absolute"}));

  auto* cost = app.add_subcommand("cost", "Expected cost of a strategy");
  std::string cost_kind = "ml";
  std::string holevo_path;
  std::string dist_path;
  add_common(cost, cfg);
  cost->add_option("--cost", cost_kind)->check(CLI::IsMember({"ml", "fidelity", "holevo"}))->capture_default_str();
  cost->add_option("--holevo-table", holevo_path, "CSV (mu,a) with a <= 0");
  cost->add_option("--strategy", strategy)->check(CLI::IsMember({"optimal", "lnx"}))->capture_default_str();
  cost->add_option("--r-true", r_true, "True squeezing used to build the distribution");
  cost->add_option("--dist", dist_path, "Evaluate an existing distribution file instead");

  auto* sweep = app.add_subcommand("sweep", "RMSE versus mean photon number");
  std::string family = "coherent";
  std::string method = "optimal-povm";
  std::vector<double> nbars{4, 16, 64, 256};
  std::size_t samples = 100000;
  add_common(sweep, cfg);
  sweep->add_option("--family", family)
      ->check(CLI::IsMember({"coherent", "displaced-squeezed-optimal"}))
      ->capture_default_str();
  sweep->add_option("--method", method)->check(CLI::IsMember({"optimal-povm", "homodyne-mc"}))->capture_default_str();
  sweep->add_option("--nbars", nbars, "Ascending mean photon numbers")->delimiter(',');
  sweep->add_option("--samples", samples, "Monte Carlo samples per point")->capture_default_str();

  auto* mc = app.add_subcommand("mc", "Homodyne plug-in estimator by Monte Carlo");
  add_common(mc, cfg);
  mc->add_option("--samples", samples)->capture_default_str();
  mc->add_option("--r-true", r_true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    validate(cfg);
    if (!std::isfinite(r_true)) throw ValidationError("--r-true must be finite");

    if (*spectral) {
      Source src = make_source(cfg);
      const auto g = compute_spectral(cfg, src, oracle);
      json meta = config_json("spectral", cfg);
      meta["config"] = {{"lambda_halfwidth", cfg.lambda_halfwidth ? json(*cfg.lambda_halfwidth) : json(nullptr)},
                        {"n_lambda", cfg.n_lambda},
                        {"oracle", oracle}};
      meta["input_state"] = state_json(src);
      meta["spectral"] = spectral_meta_json(g);
      emit(cfg, {{"mu", "g"}, {g.grid().points(), g.values()}}, std::move(meta));
    } else if (*dist) {
      Source src = make_source(cfg);
      if (strategy == "optimal" && frame == "absolute")
        throw ValidationError("--frame absolute applies to the lnx strategy only");
      auto d = compute_distribution(cfg, src, strategy, r_true);
      if (frame == "error") d = d.to_error_frame();
      json meta = config_json("dist", cfg);
      meta["config"] = {{"strategy", strategy}, {"r_true", r_true}, {"frame", to_string(d.frame())},
                        {"n_lambda", cfg.n_lambda},
                        {"lambda_halfwidth", cfg.lambda_halfwidth ? json(*cfg.lambda_halfwidth) : json(nullptr)}};
      meta["input_state"] = state_json(src);
      meta["summary"] = summary_json(d);
      emit(cfg, distribution_table(d), std::move(meta));
    } else if (*cost) {
      Source src = make_source(cfg);
      CostFunction fn = cost_kind == "ml"         ? CostFunction::max_likelihood()
                        : cost_kind == "fidelity" ? CostFunction::fidelity()
                                                  : CostFunction::max_likelihood();
      if (cost_kind == "holevo") {
        if (holevo_path.empty()) throw ValidationError("--cost holevo requires --holevo-table PATH");
        fn = read_holevo_table(holevo_path);
      }
      const auto d = dist_path.empty() ? compute_distribution(cfg, src, strategy, r_true).to_error_frame()
                                       : read_distribution(dist_path);
      const double value = expected_cost(d, fn, src.chi());
      json rec = config_json("cost", cfg);
      rec["config"] = {{"cost", to_string(fn.kind())},
                       {"strategy", dist_path.empty() ? json(strategy) : json(nullptr)},
                       {"dist", dist_path.empty() ? json(nullptr) : json(dist_path)},
                       {"holevo_table", holevo_path.empty() ? json(nullptr) : json(holevo_path)},
                       {"r_true", r_true},
                       {"n_lambda", cfg.n_lambda}};
      rec["input_state"] = state_json(src);
      rec["expected_cost"] = value;
      rec["summary"] = summary_json(d);
      write_json(cfg.out, rec);
    } else if (*sweep) {
      const Family fam = family == "coherent" ? Family::coherent : Family::displaced_squeezed_optimal;
      const Method meth = method == "optimal-povm" ? Method::optimal_povm : Method::homodyne_mc;
      SweepOptions so;
      so.n_samples = samples;
      so.seed = cfg.seed;
      so.spectral = spectral_options(cfg);
      const auto res = rmse_sweep(fam, nbars, meth, so);
      io::Table t{{"nbar", "nbar_exact", "alpha", "z", "rmse"}, {{}, {}, {}, {}, {}}};
      for (const auto& p : res.points) {
        t.columns[0].push_back(p.nbar);
        t.columns[1].push_back(p.exact_nbar);
        t.columns[2].push_back(p.state.alpha.real());
        t.columns[3].push_back(p.state.z);
        t.columns[4].push_back(p.rmse);
      }
      json meta = config_json("sweep", cfg);
      meta.erase("state");
      meta.erase("alpha");
      meta.erase("alpha_im");
      meta.erase("z");
      meta["config"] = {{"family", family}, {"method", method}, {"nbars", nbars},
                        {"samples", samples}, {"n_lambda", cfg.n_lambda}};
      meta["fit"] = {{"slope", res.fit.slope},
                     {"intercept", res.fit.intercept},
                     {"residual_sigma", res.fit.residual_sigma},
                     {"points_used", res.fit.points_used},
                     {"excluded_smallest", res.fit.excluded_smallest},
                     {"strictly_decreasing", res.strictly_decreasing}};
      emit(cfg, t, std::move(meta));
    } else if (*mc) {
      Source src = make_source(cfg);
      if (!src.gaussian) throw ValidationError("mc requires a Gaussian --state");
      const auto s = homodyne_mc(*src.gaussian, r_true, samples, cfg.seed);
      json rec = config_json("mc", cfg);
      rec["config"] = {{"samples", samples}, {"r_true", r_true}};
      rec["input_state"] = state_json(src);
      rec["result"] = {{"bias", s.bias}, {"rmse", s.rmse}, {"mean_estimate", s.mean_estimate},
                       {"n_samples", s.n_samples}, {"seed", s.seed}};
      write_json(cfg.out, rec);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical quality failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
