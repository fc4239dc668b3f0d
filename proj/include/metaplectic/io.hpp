#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "metaplectic/amalgam.hpp"
#include "metaplectic/schrodinger.hpp"
#include "metaplectic/wavefunction.hpp"

namespace metaplectic::io {

/// Matrix JSON: {"n": <dof>, "rows": [[...], ...]}. Floats are written with
/// 17 significant digits so round trips are bit-exact.
void write_matrix_json(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_json(const std::filesystem::path& path);

/// Row-major CSV, one matrix row per line.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Reads .json or .csv depending on the extension.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// Wavefunction CSV with header "x,re,im" (1-D) or "x1,x2,re,im" (2-D, axis 0
/// slowest). The grid is inferred and checked for uniformity on read; hbar is
/// not part of the format and must be supplied.
void write_wavefunction_csv(const std::filesystem::path& path, const SampledWavefunction& psi);
SampledWavefunction read_wavefunction_csv(const std::filesystem::path& path, double hbar);

/// Binary snapshot: little-endian header
///   u32 n; u32 N[axis]...; f64 x0[axis], f64 dx[axis]...; f64 hbar
/// followed by interleaved f64 (re, im) pairs in axis-0-major order.
void write_wavefunction_binary(const std::filesystem::path& path, const SampledWavefunction& psi);
SampledWavefunction read_wavefunction_binary(const std::filesystem::path& path);

/// |psi|^2 profile for plotting: "x,re,im,abs2" (or "x1,x2,re,im,abs2").
void write_profile_csv(const std::filesystem::path& path, const SampledWavefunction& psi);

/// Flat CSV view of an estimate report: one line per family member.
void write_report_csv(const std::filesystem::path& path, const NormEstimateReport& report);

/// Norm time series as "t,norm" lines.
void write_series_csv(const std::filesystem::path& path, const NormTimeSeries& series);

/// Comparison report as "t,l2_error,phase" lines.
void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace metaplectic::io
