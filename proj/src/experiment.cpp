#include "mrecon/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mrecon/io.hpp"
#include "mrecon/linear_operator.hpp"

namespace mrecon::experiment {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "': expected a real number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path or_default(const std::string& explicit_path, const fs::path& out, const char* name) {
  return explicit_path.empty() ? out / name : fs::path(explicit_path);
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "fbp") return Method::fbp;
  if (s == "iht") return Method::iht;
  if (s == "dore") return Method::dore;
  if (s == "ista") return Method::ista;
  throw ConfigError("unknown method '" + s + "' (expected fbp, iht, dore or ista)");
}

MaskSource parse_mask_source(const std::string& s) {
  if (s == "full") return MaskSource::full;
  if (s == "fov") return MaskSource::fov;
  if (s == "hull") return MaskSource::hull;
  if (s == "file") return MaskSource::file;
  throw ConfigError("unknown mask source '" + s + "' (expected full, fov, hull or file)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::fbp: return "fbp";
    case Method::iht: return "iht";
    case Method::dore: return "dore";
    case Method::ista: return "ista";
  }
  return "?";
}

std::string to_string(MaskSource m) {
  switch (m) {
    case MaskSource::full: return "full";
    case MaskSource::fov: return "fov";
    case MaskSource::hull: return "hull";
    case MaskSource::file: return "file";
  }
  return "?";
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  try {
    if (key == "n") n = static_cast<int>(parse_int(key, v));
    else if (key == "angle_spacing_deg") angle_spacing_deg = parse_real(key, v);
    else if (key == "missing_span_deg") missing_span_deg = parse_real(key, v);
    else if (key == "detectors") detectors = static_cast<int>(parse_int(key, v));
    else if (key == "freq_mode") freq_mode = parse_bool(key, v);
    else if (key == "phantom") phantom = ct::parse_phantom_variant(v);
    else if (key == "wavelet") wavelet = parse_wavelet_family(v);
    else if (key == "levels") levels = static_cast<int>(parse_int(key, v));
    else if (key == "mask") mask = parse_mask_source(v);
    else if (key == "mask_file") mask_file = v;
    else if (key == "hull_angles") hull_angles = static_cast<int>(parse_int(key, v));
    else if (key == "hull_fraction") hull_policy.fraction = parse_real(key, v);
    else if (key == "hull_absolute") {
      if (v.empty()) hull_policy.absolute.reset();
      else hull_policy.absolute = parse_real(key, v);
    } else if (key == "hull_margin_bins") hull_policy.margin_bins = parse_real(key, v);
    else if (key == "method") method = parse_method(v);
    else if (key == "r") {
      const long long rv = parse_int(key, v);
      if (rv < 0) throw ConfigError("config key 'r' must be ≥ 0");
      r = static_cast<std::size_t>(rv);
    } else if (key == "r_fraction") r_fraction = parse_real(key, v);
    else if (key == "epsilon") epsilon = parse_real(key, v);
    else if (key == "max_iters") max_iters = static_cast<int>(parse_int(key, v));
    else if (key == "tau") {
      if (v.empty()) tau.reset();
      else tau = parse_real(key, v);
    } else if (key == "tau_factor") tau_factor = parse_real(key, v);
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "out") out = v;
    else if (key == "sinogram") sinogram = v;
    else if (key == "hull_sinogram") hull_sinogram = v;
    else if (key == "truth") truth = v;
    else if (key == "image") image = v;
    else if (key == "recon") recon = v;
    else if (key == "eval_mask_file") eval_mask_file = v;
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

void ExperimentConfig::validate() const {
  if (!is_power_of_two(n) || n < 4) throw ConfigError("n must be a power of two ≥ 4");
  if (!(angle_spacing_deg > 0.0)) throw ConfigError("angle_spacing_deg must be > 0");
  if (missing_span_deg < 0.0 || missing_span_deg >= 180.0) {
    throw ConfigError("missing_span_deg must be in [0, 180)");
  }
  if (detectors != 0 && detectors < 2) throw ConfigError("detectors must be ≥ 2 (or 0 for 2n − 1)");
  if (levels < 0 || levels > log2_exact(n)) throw ConfigError("levels must be in [0, log2 n]");
  if (mask == MaskSource::file && mask_file.empty()) {
    throw ConfigError("mask = file requires mask_file");
  }
  if (hull_angles < 1) throw ConfigError("hull_angles must be ≥ 1");
  if (!(hull_policy.fraction >= 0.0)) throw ConfigError("hull_fraction must be ≥ 0");
  if (!(r_fraction > 0.0 && r_fraction <= 1.0)) throw ConfigError("r_fraction must be in (0, 1]");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (max_iters < 1) throw ConfigError("max_iters must be ≥ 1");
  if (tau && *tau < 0.0) throw ConfigError("tau must be ≥ 0");
  if (!(tau_factor >= 0.0)) throw ConfigError("tau_factor must be ≥ 0");
}

ct::DetectorGeometry ExperimentConfig::geometry() const {
  return ct::DetectorGeometry::centered(detector_count(), 2.0 / n);
}

std::vector<double> ExperimentConfig::measurement_angles() const {
  return ct::limited_angle_set(angle_spacing_deg, missing_span_deg);
}

std::vector<double> ExperimentConfig::hull_angle_set() const {
  return ct::limited_angle_set(180.0 / hull_angles, 0.0);
}

fs::path ExperimentConfig::sinogram_path() const { return or_default(sinogram, out, "sinogram.mrsino"); }
fs::path ExperimentConfig::hull_sinogram_path() const {
  return or_default(hull_sinogram, out, "hull_sinogram.mrsino");
}
fs::path ExperimentConfig::truth_path() const { return or_default(truth, out, "phantom.mrimg"); }
fs::path ExperimentConfig::image_path() const { return or_default(image, out, "phantom.mrimg"); }
fs::path ExperimentConfig::recon_path() const { return or_default(recon, out, "recon.mrimg"); }
fs::path ExperimentConfig::mask_path() const { return or_default(mask_file, out, "mask.pgm"); }

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw io::IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  ExperimentConfig cfg;
  apply_config_text(cfg, buf.str());
  return cfg;
}

PhantomOutputs make_phantom(const ExperimentConfig& cfg) {
  cfg.validate();
  auto ph = ct::shepp_logan(cfg.n, cfg.phantom);
  const auto geom = cfg.geometry();
  PhantomOutputs out{std::move(ph.image),
                     ct::ellipse_sinogram(ph.ellipses, cfg.measurement_angles(), geom),
                     ct::ellipse_sinogram(ph.ellipses, cfg.hull_angle_set(), geom)};
  return out;
}

Mask build_mask(const ExperimentConfig& cfg, const ct::Sinogram* hull_sino) {
  switch (cfg.mask) {
    case MaskSource::full: return Mask::full(cfg.n);
    case MaskSource::fov: return Mask::field_of_view(cfg.n);
    case MaskSource::hull:
      if (hull_sino == nullptr) throw ConfigError("hull mask requested without a hull sinogram");
      return hull::extract_hull_mask(*hull_sino, cfg.hull_policy, cfg.n);
    case MaskSource::file: {
      Mask m = io::read_mask_pgm(cfg.mask_file);
      if (m.side() != cfg.n) {
        throw ConfigError("mask file side " + std::to_string(m.side()) + " does not match n = " +
                          std::to_string(cfg.n));
      }
      return m;
    }
  }
  throw ConfigError("unhandled mask source");
}

Reconstruction reconstruct(const ExperimentConfig& cfg, const ct::Sinogram& measured,
                           const Mask& mask, const Image* truth, const Mask* eval_mask) {
  cfg.validate();
  measured.validate();
  if (mask.side() != cfg.n) throw ConfigError("mask side does not match n");
  if (truth != nullptr && truth->side() != cfg.n) throw ConfigError("truth image side does not match n");

  Reconstruction rec;
  rec.fbp_image = ct::fbp(measured, cfg.n);
  rec.p_m = mask.count();

  if (cfg.method == Method::fbp) {
    rec.image = rec.fbp_image;
  } else {
    const auto spec = WaveletSpec::make(cfg.wavelet, cfg.n, cfg.levels);
    const auto iset = identifiable_set(spec, mask);
    rec.p_i = iset.count();
    auto phi = ct::build_sampling_operator(measured.angles, measured.detectors, cfg.n, cfg.freq_mode);
    const Vector y = phi->measurements(measured);
    auto h = compose_h(phi, spec, mask, iset);

    solvers::SolverConfig sc;
    sc.epsilon = cfg.epsilon;
    sc.max_iters = cfg.max_iters;
    sc.seed = cfg.seed;
    sc.spectral_tol = 1e-9;
    sc.spectral_max_iters = 2000;
    sc.rho = spectral_norm(*h, sc.spectral_tol, sc.spectral_max_iters, sc.seed).rho;

    if (cfg.method == Method::ista) {
      rec.tau = cfg.tau ? *cfg.tau : solvers::tau_from_rule(*h, y, cfg.tau_factor);
      sc.tau = rec.tau;
      sc.r = iset.count();
      rec.r = iset.count();
      const Vector s0 = solvers::initialize_from_fbp(rec.fbp_image, spec, mask, iset, iset.count());
      rec.solver = solvers::mask_ista(y, *h, sc, s0);
    } else {
      rec.r = cfg.r > 0 ? cfg.r
                        : static_cast<std::size_t>(std::llround(cfg.r_fraction * iset.count()));
      rec.r = std::clamp<std::size_t>(rec.r, 1, iset.count());
      sc.r = rec.r;
      const Vector s0 = solvers::initialize_from_fbp(rec.fbp_image, spec, mask, iset, rec.r);
      rec.solver = cfg.method == Method::iht ? solvers::mask_iht(y, *h, sc, s0)
                                             : solvers::mask_dore(y, *h, sc, s0);
    }
    rec.converged = rec.solver->converged;
    rec.image = h->synthesize(rec.solver->s);
  }

  if (truth != nullptr) {
    rec.psnr = metrics::psnr(rec.image, *truth, eval_mask != nullptr ? *eval_mask : mask);
  }
  return rec;
}

namespace {

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw io::IoError("cannot create output directory '" + cfg.out.string() + "': " + ec.message());
}

double image_min(const Image& im) { return *std::min_element(im.pixels().begin(), im.pixels().end()); }
double image_max(const Image& im) { return *std::max_element(im.pixels().begin(), im.pixels().end()); }

}  // namespace

int cmd_phantom(const ExperimentConfig& cfg) {
  const auto ph = make_phantom(cfg);
  ensure_out_dir(cfg);
  io::write_image(cfg.out / "phantom.mrimg", ph.image);
  io::write_image_pgm(cfg.out / "phantom.pgm", ph.image, image_min(ph.image), image_max(ph.image));
  io::write_sinogram(cfg.sinogram_path(), ph.measured);
  io::write_sinogram(cfg.hull_sinogram_path(), ph.hull);
  if (!ph.measured.has_zero_ends() || !ph.hull.has_zero_ends()) {
    std::cerr << "warning: projection end samples are nonzero; the detector span is too short\n";
  }
  std::cout << "n = " << cfg.n << "\n"
            << "projections = " << ph.measured.projections() << "\n"
            << "hull_projections = " << ph.hull.projections() << "\n"
            << "detectors = " << ph.measured.detectors.count << "\n";
  return kExitConverged;
}

int cmd_sinogram(const ExperimentConfig& cfg) {
  cfg.validate();
  const Image img = io::read_any_image(cfg.image_path());
  if (img.side() != cfg.n) throw ConfigError("input image side does not match n");
  const auto sino = ct::radon(img, cfg.measurement_angles(), cfg.geometry());
  ensure_out_dir(cfg);
  const fs::path dest = cfg.sinogram.empty() ? cfg.out / "radon.mrsino" : fs::path(cfg.sinogram);
  io::write_sinogram(dest, sino);
  std::cout << "projections = " << sino.projections() << "\n"
            << "detectors = " << sino.detectors.count << "\n"
            << "output = " << dest.string() << "\n";
  return kExitConverged;
}

int cmd_hull(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto sino = io::read_sinogram(cfg.hull_sinogram_path());
  if (!sino.has_zero_ends()) {
    std::cerr << "warning: projection end samples are nonzero; hull may be clipped\n";
  }
  const Mask m = hull::extract_hull_mask(sino, cfg.hull_policy, cfg.n);
  ensure_out_dir(cfg);
  io::write_mask_pgm(cfg.out / "mask.pgm", m);
  const double ratio = static_cast<double>(m.count()) / static_cast<double>(m.pixel_count());
  const std::size_t fov = Mask::field_of_view(cfg.n).count();
  std::ostringstream stats;
  stats << "p = " << m.pixel_count() << "\n"
        << "p_M = " << m.count() << "\n"
        << "p_M_over_p = " << real(ratio) << "\n"
        << "p_fov = " << fov << "\n"
        << "p_M_over_p_fov = " << real(static_cast<double>(m.count()) / fov) << "\n";
  {
    std::ofstream os(cfg.out / "hull_stats.txt");
    if (!os) throw io::IoError("cannot write hull_stats.txt");
    os << stats.str();
  }
  std::cout << stats.str();
  return kExitConverged;
}

int cmd_reconstruct(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto measured = io::read_sinogram(cfg.sinogram_path());
  if (measured.detectors.count < 2) throw ConfigError("sinogram has fewer than 2 detectors");
  std::optional<ct::Sinogram> hull_sino;
  Mask mask = [&] {
    if (cfg.mask == MaskSource::hull) {
      hull_sino = io::read_sinogram(cfg.hull_sinogram_path());
      return build_mask(cfg, &*hull_sino);
    }
    return build_mask(cfg, nullptr);
  }();

  std::optional<Image> truth;
  if (fs::exists(cfg.truth_path())) truth = io::read_any_image(cfg.truth_path());
  std::optional<Mask> eval_mask;
  if (!cfg.eval_mask_file.empty()) eval_mask = io::read_mask_pgm(cfg.eval_mask_file);

  const auto rec = reconstruct(cfg, measured, mask, truth ? &*truth : nullptr,
                               eval_mask ? &*eval_mask : nullptr);
  ensure_out_dir(cfg);
  io::write_image(cfg.out / "recon.mrimg", rec.image);
  const double lo = truth ? image_min(*truth) : image_min(rec.image);
  const double hi = truth ? image_max(*truth) : image_max(rec.image);
  io::write_image_pgm(cfg.out / "recon.pgm", rec.image, lo, hi);
  if (rec.solver) {
    std::ofstream os(cfg.out / "trace.csv");
    if (!os) throw io::IoError("cannot write trace.csv");
    solvers::write_trace_csv(os, rec.solver->trace);
  }
  std::ostringstream summary;
  summary << "method = " << to_string(cfg.method) << "\n"
          << "mask = " << to_string(cfg.mask) << "\n"
          << "p_M = " << rec.p_m << "\n";
  if (rec.solver) {
    summary << "p_I = " << rec.p_i << "\n"
            << "r = " << rec.r << "\n"
            << "iterations = " << rec.solver->iterations << "\n"
            << "converged = " << (rec.converged ? "true" : "false") << "\n"
            << "rho_hat = " << real(rec.solver->rho_hat) << "\n";
    if (cfg.method == Method::ista) summary << "tau = " << real(rec.tau) << "\n";
    if (!rec.solver->trace.records.empty()) {
      summary << "final_mu = " << real(rec.solver->trace.records.back().mu) << "\n"
              << "final_residual_sq = " << real(rec.solver->trace.records.back().residual_sq) << "\n";
    }
  }
  if (rec.psnr) {
    std::ofstream os(cfg.out / "psnr.txt");
    if (!os) throw io::IoError("cannot write psnr.txt");
    metrics::write_report(os, *rec.psnr);
    std::ostringstream block;
    metrics::write_report(block, *rec.psnr);
    summary << block.str();
  }
  {
    std::ofstream os(cfg.out / "run.txt");
    if (!os) throw io::IoError("cannot write run.txt");
    os << summary.str();
  }
  std::cout << summary.str();
  return rec.converged ? kExitConverged : kExitMaxIters;
}

int cmd_eval(const ExperimentConfig& cfg) {
  cfg.validate();
  const Image recon = io::read_any_image(cfg.recon_path());
  const Image truth = io::read_any_image(cfg.truth_path());
  if (recon.side() != truth.side()) throw ConfigError("recon and truth sizes differ");
  const Mask mask = !cfg.eval_mask_file.empty() ? io::read_mask_pgm(cfg.eval_mask_file)
                    : cfg.mask == MaskSource::file ? io::read_mask_pgm(cfg.mask_file)
                    : cfg.mask == MaskSource::hull ? io::read_mask_pgm(cfg.mask_path())
                    : cfg.mask == MaskSource::fov  ? Mask::field_of_view(truth.side())
                                                   : Mask::full(truth.side());
  const auto rep = metrics::psnr(recon, truth, mask);
  metrics::write_report(std::cout, rep);
  return kExitConverged;
}

}  // namespace mrecon::experiment
