#pragma once

#include <string>
#include <utility>

#include "parsefit/core.hpp"
#include "parsefit/linalg.hpp"

namespace parsefit {

/// A frame given through its synthesis matrix: column i is the i-th frame
/// vector. The frame condition requires at least one nonzero column.
struct Frame {
  Matrix synthesis;
  std::string label;
};

/// A frame whose synthesis matrix is a partial isometry.
struct ParsevalFrame {
  Matrix synthesis;
};

/// A pair of orthogonal projections on the same space.
struct ProjectionPair {
  Matrix p;
  Matrix q;
};

/// Throws DegenerateFrameError for an all-zero synthesis matrix and
/// DomainError for non-finite entries or zero columns count.
void validate_frame(const Frame& f, const Tolerances& tol = {});

/// (lower, upper) optimal frame bounds on the span of the frame: squared
/// smallest nonzero and largest singular values of the synthesis matrix.
std::pair<double, double> frame_bounds(const Frame& f, const Tolerances& tol = {});

bool is_parseval(const Frame& f, double tol);

/// The Parseval frame {U e_i} from the polar decomposition F = U|F|; spans
/// the same subspace as the input frame.
ParsevalFrame canonical_parseval(const Frame& f, const Tolerances& tol = {});

/// Index of a pair of projections, dim(ker q ∩ ran p) - dim(ran q ∩ ker p),
/// computed through intersection ranks and cross-checked against the rank
/// difference rank(p) - rank(q).
int index_pair(const ProjectionPair& pair, const Tolerances& tol = {});

bool index_additivity_check(const Matrix& p, const Matrix& q, const Matrix& r,
                            const Tolerances& tol = {});

/// True iff the two synthesis operators have equal kernels (row spaces agree).
bool weakly_similar(const Frame& f, const Frame& g, const Tolerances& tol = {});

/// Squared l2 distance between the frame vector sequences.
double quadratic_distance(const Frame& f, const Frame& g);

/// Connected-component index of the Parseval frame x relative to the frame f:
/// the index of the projection pair (U*U, X*X) with U the canonical polar
/// factor of f. Three independent characterizations are computed and must
/// agree.
int component_of(const ParsevalFrame& x, const Frame& f, const Tolerances& tol = {});

}  // namespace parsefit
