#pragma once

// MIMO channel realizations and the zero-forcing pre/post-coders that turn
// each user's link into N parallel scalar sub-channels.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ychan {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kRankTolerance = 1e-8;      // relative to the largest singular value
inline constexpr double kIdentityTolerance = 1e-10;  // max-entry residual of H V - a I and U D - I

struct ChannelRealization {
  int K = 0;
  int M = 0;
  int N = 0;
  std::vector<ComplexMatrix> uplink;    // H_i, N x M
  std::vector<ComplexMatrix> downlink;  // D_i, M x N
  std::uint64_t seed = 0;
};

/// i.i.d. CN(0, 1) entries from a seeded generator; redraws (bounded) until
/// every matrix has rank min{M, N}. Throws Error(Errc::degenerate_channel).
ChannelRealization random_channel(int K, int M, int N, std::uint64_t seed);

/// sigma_min / sigma_max > kRankTolerance
bool has_full_rank(const ComplexMatrix& A);

struct Precoder {
  ComplexMatrix V;  // M x N, unit Frobenius norm
  double alpha = 0;  // H V = alpha I
};

/// V = alpha H^H (H H^H)^{-1}, alpha = 1 / ||H^H (H H^H)^{-1}||_F.
/// Throws Error(Errc::regime) if H has more rows than columns and
/// Error(Errc::conditioning) if H H^H is numerically singular.
Precoder uplink_precoder(const ComplexMatrix& H);

/// U = (D^H D)^{-1} D^H. Same error conditions as uplink_precoder.
ComplexMatrix downlink_postcoder(const ComplexMatrix& D);

struct CoderSet {
  std::vector<ComplexMatrix> precoders;
  std::vector<double> alphas;
  std::vector<ComplexMatrix> postcoders;
};

CoderSet build_coders(const ChannelRealization& ch);

/// Keeps the first min{M, N} relay antennas.
ChannelRealization clamp_antennas(const ChannelRealization& ch);

/// max |A_ij - B_ij|
double max_abs_diff(const ComplexMatrix& A, const ComplexMatrix& B);

}  // namespace ychan
