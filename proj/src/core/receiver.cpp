#include "receiver.hpp"

#include <cmath>
#include <complex>

#include "errors.hpp"

namespace leoisl {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

cd unit_phasor(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_noise(double s2) {
  if (!(s2 > 0.0)) fail(Err::domain, "noise variance must be positive");
}

}  // namespace

Eigen::VectorXcd doppler_phasors(const GroupChannel& gc, long u) {
  const int L = gc.size();
  Eigen::VectorXcd e(L);
  for (int l = 0; l < L; ++l) {
    double turns = static_cast<double>(gc.nus[l]) * static_cast<double>(u);
    turns *= static_cast<double>(gc.C.rows());
    turns -= std::floor(turns);
    e(l) = unit_phasor(kTwoPi * turns);
  }
  return e;
}

Eigen::MatrixXcd time_varying_channel(const GroupChannel& gc, long u) {
  return gc.H() * doppler_phasors(gc, u).asDiagonal();
}

Eigen::MatrixXcd mmse_filter(const Eigen::MatrixXcd& H, double s2) {
  check_noise(s2);
  if (H.size() == 0) fail(Err::shape, "empty channel matrix");
  const int S = static_cast<int>(H.rows());
  Eigen::MatrixXcd B = H * H.adjoint();
  B.diagonal().array() += s2;
  Eigen::LLT<Eigen::MatrixXcd> llt(B);
  if (llt.info() != Eigen::Success)
    fail(Err::singular, "MMSE normal matrix is not positive definite");
  Eigen::MatrixXcd X = llt.solve(Eigen::MatrixXcd::Identity(S, S));
  return H.adjoint() * X;
}

Eigen::VectorXd sinr_per_stream(const Eigen::MatrixXcd& H, double s2) {
  check_noise(s2);
  if (H.size() == 0) fail(Err::shape, "empty channel matrix");
  const int L = static_cast<int>(H.cols());
  Eigen::MatrixXcd B = H.adjoint() * H;
  B.diagonal().array() += s2;
  Eigen::LLT<Eigen::MatrixXcd> llt(B);
  if (llt.info() != Eigen::Success)
    fail(Err::singular, "SINR normal matrix is not positive definite");
  Eigen::MatrixXcd inv = llt.solve(Eigen::MatrixXcd::Identity(L, L));
  Eigen::VectorXd out(L);
  for (int l = 0; l < L; ++l) {
    double d = inv(l, l).real();
    double v = 1.0 / (s2 * d) - 1.0;
    out(l) = v > 0.0 ? v : 0.0;
  }
  return out;
}

Eigen::MatrixXcd draw_symbols(Alphabet a, int streams, int n_symbols, Rng& rng) {
  if (streams <= 0 || n_symbols <= 0)
    fail(Err::shape, "symbol block dimensions must be positive");
  Eigen::MatrixXcd b(streams, n_symbols);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double inv_sqrt10 = 1.0 / std::sqrt(10.0);
  for (int u = 0; u < n_symbols; ++u) {
    for (int l = 0; l < streams; ++l) {
      switch (a) {
        case Alphabet::qpsk: {
          std::uint64_t w = rng.next();
          double re = (w & 1u) ? 1.0 : -1.0;
          double im = (w & 2u) ? 1.0 : -1.0;
          b(l, u) = cd(re, im) * inv_sqrt2;
          break;
        }
        case Alphabet::qam16: {
          std::uint64_t w = rng.next();
          static const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
          double re = levels[w & 3u];
          double im = levels[(w >> 2) & 3u];
          b(l, u) = cd(re, im) * inv_sqrt10;
          break;
        }
        case Alphabet::gaussian: {
          auto [g1, g2] = rng.gauss_pair();
          b(l, u) = cd(g1, g2) * inv_sqrt2;
          break;
        }
      }
    }
  }
  return b;
}

cd slice_symbol(Alphabet a, cd z) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double inv_sqrt10 = 1.0 / std::sqrt(10.0);
  switch (a) {
    case Alphabet::qpsk: {
      double re = z.real() >= 0.0 ? 1.0 : -1.0;
      double im = z.imag() >= 0.0 ? 1.0 : -1.0;
      return cd(re, im) * inv_sqrt2;
    }
    case Alphabet::qam16: {
      auto snap = [](double x) {
        if (x < -2.0) return -3.0;
        if (x < 0.0) return -1.0;
        if (x < 2.0) return 1.0;
        return 3.0;
      };
      return cd(snap(z.real() * std::sqrt(10.0)),
                snap(z.imag() * std::sqrt(10.0))) *
             inv_sqrt10;
    }
    case Alphabet::gaussian:
      return z;
  }
  fail(Err::internal, "unknown alphabet");
}

SimOutput simulate_group_transmission(const GroupChannel& gc, double s2,
                                      int n_symbols, std::uint64_t seed,
                                      Alphabet a) {
  check_noise(s2);
  if (n_symbols <= 0) fail(Err::shape, "number of symbols must be positive");
  const int L = gc.size();
  const int S = static_cast<int>(gc.C.rows());
  Rng rng(seed);
  SimOutput out;
  out.symbols = draw_symbols(a, L, n_symbols, rng);
  out.received.resize(S, n_symbols);
  const double sigma = std::sqrt(s2 / 2.0);
  const Eigen::MatrixXcd H = gc.H();
  for (int u = 0; u < n_symbols; ++u) {
    Eigen::VectorXcd e = doppler_phasors(gc, u);
    out.received.col(u) = H * e.cwiseProduct(out.symbols.col(u)).matrix();
    for (int s = 0; s < S; ++s) {
      auto [g1, g2] = rng.gauss_pair();
      out.received(s, u) += cd(sigma * g1, sigma * g2);
    }
  }
  return out;
}

SicResult sic_detect(const Eigen::MatrixXcd& received, const GroupChannel& gc,
                     double s2, Alphabet a,
                     const Eigen::MatrixXcd* genie_symbols) {
  check_noise(s2);
  const int L = gc.size();
  const int S = static_cast<int>(gc.C.rows());
  const int n_symbols = static_cast<int>(received.cols());
  if (received.rows() != S) fail(Err::shape, "received block has wrong row count");
  if (n_symbols <= 0) fail(Err::shape, "received block is empty");
  if (genie_symbols &&
      (genie_symbols->rows() != L || genie_symbols->cols() != n_symbols))
    fail(Err::shape, "genie symbol block has wrong dimensions");

  SicResult res;
  res.decided.resize(L, n_symbols);
  res.trace.order.reserve(L);
  res.trace.sinrs.reserve(L);

  for (int u = 0; u < n_symbols; ++u) {
    Eigen::MatrixXcd Hu = time_varying_channel(gc, u);
    Eigen::VectorXcd y = received.col(u);
    std::vector<int> active(L);
    for (int l = 0; l < L; ++l) active[l] = l;

    for (int stage = 0; stage < L; ++stage) {
      const int n_act = static_cast<int>(active.size());
      Eigen::MatrixXcd Ha(S, n_act);
      for (int j = 0; j < n_act; ++j) Ha.col(j) = Hu.col(active[j]);
      Eigen::VectorXd sinrs = sinr_per_stream(Ha, s2);
      int best = 0;
      for (int j = 1; j < n_act; ++j)
        if (sinrs(j) > sinrs(best)) best = j;
      const int stream = active[best];

      Eigen::MatrixXcd F = mmse_filter(Ha, s2);
      cd z = (F.row(best) * y)(0);
      cd cancelled;
      if (genie_symbols) {
        cancelled = (*genie_symbols)(stream, u);
        res.decided(stream, u) = z;  // soft estimate; cancellation is ideal
      } else {
        cancelled = slice_symbol(a, z);
        res.decided(stream, u) = cancelled;
      }
      y -= Hu.col(stream) * cancelled;
      active.erase(active.begin() + best);

      if (u == 0) {
        res.trace.order.push_back(stream);
        res.trace.sinrs.push_back(sinrs(best));
      }
    }
  }
  return res;
}

DecomposedFilter decomposed_filter(const GroupChannel& gc, double s2) {
  DecomposedFilter df;
  df.F = mmse_filter(gc.H(), s2);
  const int L = gc.size();
  df.S = static_cast<int>(gc.C.rows());
  df.nus.resize(L);
  for (int l = 0; l < L; ++l) df.nus(l) = gc.nus[l];
  return df;
}

Eigen::MatrixXcd apply_compensation(const DecomposedFilter& df, long u) {
  Eigen::MatrixXcd out = df.F;
  const int L = static_cast<int>(out.rows());
  // The turns expression mirrors doppler_phasors exactly so the compensated
  // filter matches the directly recomputed one to rounding error.
  for (int l = 0; l < L; ++l) {
    double turns = df.nus(l) * static_cast<double>(u);
    turns *= static_cast<double>(df.S);
    turns -= std::floor(turns);
    out.row(l) *= std::conj(unit_phasor(kTwoPi * turns));
  }
  return out;
}

}  // namespace leoisl
