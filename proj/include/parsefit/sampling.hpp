#pragma once

#include <random>

#include "parsefit/core.hpp"
#include "parsefit/frame.hpp"

namespace parsefit {

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
Matrix random_unitary(Index n, std::mt19937_64& rng);

/// Random frame with the given shape: unitary factors around a random
/// nonincreasing singular spectrum in [0, s_max]; each singular value is
/// zeroed with probability zero_prob to vary the rank.
Frame random_frame(Index rows, Index cols, std::mt19937_64& rng,
                   double s_max = 2.0, double zero_prob = 0.25);

/// Uniformly conjugated partial isometry of rank rank(F) - k; lies in the
/// connected component of index k relative to f.
ParsevalFrame sample_parseval_in_component(const Frame& f, int k,
                                           std::mt19937_64& rng,
                                           const Tolerances& tol = {});

}  // namespace parsefit
