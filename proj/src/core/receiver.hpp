#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "channel.hpp"
#include "rng.hpp"

namespace leoisl {

// Per-symbol phase progression factors E[u]: entry l is exp(j*2*pi*S*nu_l*u).
Eigen::VectorXcd doppler_phasors(const GroupChannel& gc, long u);

// Effective channel at symbol interval u: H(u) = H * diag(phasors(u)).
Eigen::MatrixXcd time_varying_channel(const GroupChannel& gc, long u);

// MMSE filter F = H^H (H H^H + s2 I)^-1, one row per stream.
Eigen::MatrixXcd mmse_filter(const Eigen::MatrixXcd& H, double s2);

// Post-MMSE SINR per stream: 1 / (s2 * [(s2 I + H^H H)^-1]_ll) - 1.
Eigen::VectorXd sinr_per_stream(const Eigen::MatrixXcd& H, double s2);

enum class Alphabet { qpsk, qam16, gaussian };

Eigen::MatrixXcd draw_symbols(Alphabet a, int streams, int n_symbols, Rng& rng);
cd slice_symbol(Alphabet a, cd z);

struct SimOutput {
  Eigen::MatrixXcd received;  // S x n_symbols
  Eigen::MatrixXcd symbols;   // L x n_symbols
};

SimOutput simulate_group_transmission(const GroupChannel& gc, double s2,
                                      int n_symbols, std::uint64_t seed,
                                      Alphabet a = Alphabet::qpsk);

struct SicTrace {
  std::vector<int> order;     // stream positions in decode order (at u = 0)
  std::vector<double> sinrs;  // post-MMSE SINR at each stage
};

struct SicResult {
  Eigen::MatrixXcd decided;  // L x n_symbols
  SicTrace trace;
};

// Ordered MMSE-SIC detection over every symbol interval. At each stage the
// stream with the largest post-MMSE SINR is detected (ties resolved toward
// the lowest stream position), sliced against the alphabet, and cancelled.
// When genie_symbols is given, cancellation uses the true symbols, so stage
// SINRs reflect perfect interference removal regardless of slicer errors.
SicResult sic_detect(const Eigen::MatrixXcd& received, const GroupChannel& gc,
                     double s2, Alphabet a,
                     const Eigen::MatrixXcd* genie_symbols = nullptr);

struct DecomposedFilter {
  Eigen::MatrixXcd F;       // time-invariant MMSE filter of H
  Eigen::VectorXd nus;      // normalized Doppler per stream
  int S = 0;                // samples per symbol; phase advances 2*pi*S*nu/interval
};

// Splits the time-varying MMSE filter into an invariant part plus per-stream
// phase compensation: F(u) = conj(E[u]) * F.
DecomposedFilter decomposed_filter(const GroupChannel& gc, double s2);

Eigen::MatrixXcd apply_compensation(const DecomposedFilter& df, long u);

}  // namespace leoisl
