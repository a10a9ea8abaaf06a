#pragma once

// End-to-end pipeline: phantom → sinograms → hull mask → H → solver.
// Shared by the `mrecon` CLI and the acceptance suite.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "mrecon/ct.hpp"
#include "mrecon/hull.hpp"
#include "mrecon/mask.hpp"
#include "mrecon/metrics.hpp"
#include "mrecon/solvers.hpp"
#include "mrecon/wavelet.hpp"

namespace mrecon::experiment {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Method { fbp, iht, dore, ista };
enum class MaskSource { full, fov, hull, file };

Method parse_method(const std::string& s);
MaskSource parse_mask_source(const std::string& s);
std::string to_string(Method m);
std::string to_string(MaskSource m);

struct ExperimentConfig {
  int n = 128;
  double angle_spacing_deg = 1.0;
  double missing_span_deg = 25.0;
  int detectors = 0;  // 0 → 2n − 1
  bool freq_mode = true;
  ct::PhantomVariant phantom = ct::PhantomVariant::shepp_logan;

  WaveletFamily wavelet = WaveletFamily::haar;
  int levels = 0;  // 0 → log2(n) − 2

  MaskSource mask = MaskSource::hull;
  std::string mask_file;
  int hull_angles = 180;
  hull::ThresholdPolicy hull_policy;

  Method method = Method::dore;
  std::size_t r = 0;        // 0 → round(r_fraction · p_I)
  double r_fraction = 0.04;
  double epsilon = 1e-14;
  int max_iters = 100000;
  std::optional<double> tau;  // absolute; otherwise tau_factor · ‖Hᵀy‖∞
  double tau_factor = 1e-5;

  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  std::string sinogram;       // measurement sinogram (default <out>/sinogram.mrsino)
  std::string hull_sinogram;  // default <out>/hull_sinogram.mrsino
  std::string truth;          // default <out>/phantom.mrimg
  std::string image;          // input of `sinogram` (default <out>/phantom.mrimg)
  std::string recon;          // input of `eval` (default <out>/recon.mrimg)
  std::string eval_mask_file; // PSNR mask (default: reconstruction mask)

  /// Applies one key = value pair; throws ConfigError on unknown keys or
  /// malformed values.
  void set(const std::string& key, const std::string& value);
  /// Checks cross-field invariants.
  void validate() const;

  int detector_count() const { return detectors > 0 ? detectors : 2 * n - 1; }
  ct::DetectorGeometry geometry() const;
  std::vector<double> measurement_angles() const;
  std::vector<double> hull_angle_set() const;

  std::filesystem::path sinogram_path() const;
  std::filesystem::path hull_sinogram_path() const;
  std::filesystem::path truth_path() const;
  std::filesystem::path image_path() const;
  std::filesystem::path recon_path() const;
  std::filesystem::path mask_path() const;
};

/// Parses `key = value` lines; '#' starts a comment.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_config_text(ExperimentConfig& cfg, const std::string& text);

struct PhantomOutputs {
  Image image;
  ct::Sinogram measured;
  ct::Sinogram hull;
};

/// Rasterized phantom plus analytic sinograms at the measurement angles
/// and at the hull angles.
PhantomOutputs make_phantom(const ExperimentConfig& cfg);

/// Mask for the configured source. `hull_sino` is required for hull masks.
Mask build_mask(const ExperimentConfig& cfg, const ct::Sinogram* hull_sino);

struct Reconstruction {
  Image image;
  Image fbp_image;
  std::optional<solvers::SolverResult> solver;
  std::optional<metrics::PsnrReport> psnr;
  std::size_t p_m = 0;
  std::size_t p_i = 0;
  std::size_t r = 0;
  double tau = 0.0;
  bool converged = true;
};

/// Runs the configured method on `measured`. PSNR is evaluated against
/// `truth` inside `eval_mask` (or `mask` when null) when `truth` is given.
Reconstruction reconstruct(const ExperimentConfig& cfg, const ct::Sinogram& measured,
                           const Mask& mask, const Image* truth, const Mask* eval_mask);

// File-driven commands: each returns a process exit code.
int cmd_phantom(const ExperimentConfig& cfg);
int cmd_sinogram(const ExperimentConfig& cfg);
int cmd_hull(const ExperimentConfig& cfg);
int cmd_reconstruct(const ExperimentConfig& cfg);
int cmd_eval(const ExperimentConfig& cfg);

inline constexpr int kExitConverged = 0;
inline constexpr int kExitMaxIters = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitIo = 4;

}  // namespace mrecon::experiment
