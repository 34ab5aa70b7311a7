#include "ychan/channel.hpp"

#include <random>
#include <string>

#include "ychan/error.hpp"

namespace ychan {

namespace {

constexpr int kMaxRedraws = 32;

ComplexMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  ComplexMatrix A(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = component(rng);
      const double im = component(rng);
      A(r, c) = Complex(re, im);
    }
  return A;
}

// Gram matrices of generic channels are Hermitian positive definite; the
// Cholesky reciprocal condition estimate is on the squared singular values.
Eigen::LLT<ComplexMatrix> factor_gram(const ComplexMatrix& gram) {
  Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < kRankTolerance * kRankTolerance)
    throw Error(Errc::conditioning, "Gram matrix is numerically singular");
  return llt;
}

}  // namespace

bool has_full_rank(const ComplexMatrix& A) {
  if (A.size() == 0) return false;
  const Eigen::JacobiSVD<ComplexMatrix> svd(A);
  const auto& s = svd.singularValues();
  return s(0) > 0 && s(s.size() - 1) > kRankTolerance * s(0);
}

ChannelRealization random_channel(int K, int M, int N, std::uint64_t seed) {
  if (K < 2 || M < 1 || N < 1) throw Error(Errc::range, "channel needs K >= 2, M >= 1, N >= 1");
  std::mt19937_64 rng(seed);
  ChannelRealization ch{K, M, N, {}, {}, seed};
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    ch.uplink.clear();
    ch.downlink.clear();
    bool ok = true;
    for (int i = 0; i < K && ok; ++i) {
      ch.uplink.push_back(gaussian_matrix(N, M, rng));
      ch.downlink.push_back(gaussian_matrix(M, N, rng));
      ok = has_full_rank(ch.uplink.back()) && has_full_rank(ch.downlink.back());
    }
    if (ok) return ch;
  }
  throw Error(Errc::degenerate_channel, "no full-rank realization after " + std::to_string(kMaxRedraws) + " draws");
}

Precoder uplink_precoder(const ComplexMatrix& H) {
  if (H.rows() > H.cols())
    throw Error(Errc::regime, "uplink precoding needs N <= M (H is " + std::to_string(H.rows()) + "x" +
                                  std::to_string(H.cols()) + ")");
  const auto llt = factor_gram(H * H.adjoint());
  // (H H^H)^{-1} H, then adjoint: H^H (H H^H)^{-1} since the Gram matrix is Hermitian.
  const ComplexMatrix pinv = llt.solve(H).adjoint();
  const double norm = pinv.norm();
  return {pinv / norm, 1.0 / norm};
}

ComplexMatrix downlink_postcoder(const ComplexMatrix& D) {
  if (D.cols() > D.rows())
    throw Error(Errc::regime, "downlink post-coding needs N <= M (D is " + std::to_string(D.rows()) + "x" +
                                  std::to_string(D.cols()) + ")");
  const auto llt = factor_gram(D.adjoint() * D);
  return llt.solve(D.adjoint());
}

CoderSet build_coders(const ChannelRealization& ch) {
  CoderSet coders;
  for (int i = 0; i < ch.K; ++i) {
    auto [V, alpha] = uplink_precoder(ch.uplink[i]);
    coders.precoders.push_back(std::move(V));
    coders.alphas.push_back(alpha);
    coders.postcoders.push_back(downlink_postcoder(ch.downlink[i]));
  }
  return coders;
}

ChannelRealization clamp_antennas(const ChannelRealization& ch) {
  if (ch.N <= ch.M) return ch;
  ChannelRealization out = ch;
  out.N = ch.M;
  for (auto& H : out.uplink) H = H.topRows(out.N).eval();
  for (auto& D : out.downlink) D = D.leftCols(out.N).eval();
  return out;
}

double max_abs_diff(const ComplexMatrix& A, const ComplexMatrix& B) { return (A - B).cwiseAbs().maxCoeff(); }

}  // namespace ychan
